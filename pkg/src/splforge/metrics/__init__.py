"""Static measurement of source corpora.

The pipeline: scan_file per source file, detect_duplicates and
package_cycles across files, compute_debt from both, aggregate into a
MetricsReport, and compare three reports side by side.
"""

from .cycles import package_cycles
from .debt import DebtFinding, DebtRules, compute_debt, minutes_to_days
from .duplicates import DuplicateBlock, detect_duplicates
from .report import (
    ComparisonReport,
    ComparisonRow,
    MetricsReport,
    aggregate,
    compare,
    comparison_key_values,
    measure_directory,
    read_report,
    render_comparison,
    write_report,
)
from .scanner import FunctionMetric, SourceUnit, scan_file, scan_text

__all__ = [
    "ComparisonReport",
    "ComparisonRow",
    "DebtFinding",
    "DebtRules",
    "DuplicateBlock",
    "FunctionMetric",
    "MetricsReport",
    "SourceUnit",
    "aggregate",
    "compare",
    "comparison_key_values",
    "compute_debt",
    "detect_duplicates",
    "measure_directory",
    "minutes_to_days",
    "package_cycles",
    "read_report",
    "render_comparison",
    "scan_file",
    "scan_text",
    "write_report",
]
