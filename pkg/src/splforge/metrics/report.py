"""Aggregated reports, their on-disk form, and side-by-side comparison.

The .metrics format is flat ``key=value`` text: a format tag, the
aggregate block, then per-file and per-function keys in a fixed order.
The reader is strict (any unknown or out-of-order key fails), which
keeps write/read byte-exact in both directions.

``compare`` lines up three reports: a conventionally grown baseline,
the product-line core, and one derived application. The combined
column sums the core and the derived application; the delta column
subtracts the baseline from the combination.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path, PurePosixPath

from ..errors import ReportSyntaxError
from .cycles import package_cycles
from .debt import DebtFinding, DebtRules, compute_debt
from .duplicates import DuplicateBlock, detect_duplicates
from .scanner import FunctionMetric, SourceUnit, scan_file

FORMAT_TAG = "splforge-metrics-1"
_MEAN_QUANTUM = Decimal("0.1")


@dataclass(frozen=True)
class MetricsReport:
    files: tuple[SourceUnit, ...]
    total_complexity: int
    mean_complexity_per_file: Decimal
    total_code_lines: int
    duplicate_lines: int
    package_cycles: int
    debt_minutes: int
    debt_days: Decimal


def aggregate(
    units: list[SourceUnit],
    duplicates: tuple[list[DuplicateBlock], int],
    cycles: tuple[int, list[list[str]]],
    debt: tuple[list[DebtFinding], int, Decimal],
) -> MetricsReport:
    """Combine the pipeline stages into one report."""
    total_complexity = sum(f.complexity for unit in units for f in unit.functions)
    if units:
        mean = (Decimal(total_complexity) / len(units)).quantize(
            _MEAN_QUANTUM, rounding=ROUND_HALF_UP)
    else:
        mean = Decimal("0.0")
    _, duplicate_lines = duplicates
    cycle_count, _ = cycles
    _, debt_minutes, debt_days = debt
    return MetricsReport(
        files=tuple(units),
        total_complexity=total_complexity,
        mean_complexity_per_file=mean,
        total_code_lines=sum(unit.code_lines for unit in units),
        duplicate_lines=duplicate_lines,
        package_cycles=cycle_count,
        debt_minutes=debt_minutes,
        debt_days=debt_days,
    )


def measure_directory(
    root: Path,
    glob: str = "**/*.gsrc",
    min_block: int = 6,
    rules: DebtRules = DebtRules(),
) -> tuple[MetricsReport, list[DebtFinding], list[DuplicateBlock]]:
    """Scan every matching file under ``root`` and run the full pipeline.

    Paths in the report are POSIX-style and relative to ``root``,
    sorted, so the same tree measures identically anywhere.
    """
    paths = sorted(
        (str(PurePosixPath(path.relative_to(root))), path)
        for path in root.glob(glob)
        if path.is_file()
    )
    units = [scan_file(path.read_bytes(), rel) for rel, path in paths]
    duplicates = detect_duplicates(units, min_block=min_block)
    cycles = package_cycles(units)
    debt = compute_debt(units, duplicates[0], rules=rules)
    report = aggregate(units, duplicates, cycles, debt)
    return report, debt[0], duplicates[0]


# -- .metrics text form -------------------------------------------------


def write_report(report: MetricsReport) -> str:
    lines = [
        f"format={FORMAT_TAG}",
        f"files={len(report.files)}",
        f"total_complexity={report.total_complexity}",
        f"mean_complexity_per_file={report.mean_complexity_per_file}",
        f"total_code_lines={report.total_code_lines}",
        f"duplicate_lines={report.duplicate_lines}",
        f"package_cycles={report.package_cycles}",
        f"debt_minutes={report.debt_minutes}",
        f"debt_days={report.debt_days}",
    ]
    for i, unit in enumerate(report.files):
        prefix = f"file.{i}"
        lines += [
            f"{prefix}.path={unit.path}",
            f"{prefix}.package={unit.package_name}",
            f"{prefix}.imports={','.join(unit.imports)}",
            f"{prefix}.physical_lines={unit.physical_lines}",
            f"{prefix}.code_lines={unit.code_lines}",
            f"{prefix}.comment_lines={unit.comment_lines}",
            f"{prefix}.blank_lines={unit.blank_lines}",
            f"{prefix}.functions={len(unit.functions)}",
        ]
        for j, function in enumerate(unit.functions):
            fn_prefix = f"{prefix}.fn.{j}"
            lines += [
                f"{fn_prefix}.name={function.name}",
                f"{fn_prefix}.start_line={function.start_line}",
                f"{fn_prefix}.effective_lines={function.effective_lines}",
                f"{fn_prefix}.complexity={function.complexity}",
                f"{fn_prefix}.max_nesting={function.max_nesting}",
            ]
    return "\n".join(lines) + "\n"


class _KeyReader:
    def __init__(self, text: str) -> None:
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.cursor = 0

    def take(self, key: str) -> str:
        if self.cursor >= len(self.lines):
            raise ReportSyntaxError(f"line {self.cursor + 1}: expected key {key!r}, got end of input")
        line = self.lines[self.cursor]
        found, separator, value = line.partition("=")
        if not separator or found != key:
            raise ReportSyntaxError(f"line {self.cursor + 1}: expected key {key!r}, got {line!r}")
        self.cursor += 1
        return value

    def take_int(self, key: str) -> int:
        value = self.take(key)
        try:
            return int(value)
        except ValueError:
            raise ReportSyntaxError(f"key {key!r} needs an integer, got {value!r}") from None

    def take_decimal(self, key: str) -> Decimal:
        value = self.take(key)
        try:
            return Decimal(value)
        except ArithmeticError:
            raise ReportSyntaxError(f"key {key!r} needs a decimal, got {value!r}") from None

    def done(self) -> None:
        if self.cursor != len(self.lines):
            raise ReportSyntaxError(
                f"line {self.cursor + 1}: unexpected content: {self.lines[self.cursor]!r}")


def read_report(text: str) -> MetricsReport:
    reader = _KeyReader(text)
    tag = reader.take("format")
    if tag != FORMAT_TAG:
        raise ReportSyntaxError(f"unsupported format tag: {tag!r}")
    file_count = reader.take_int("files")
    total_complexity = reader.take_int("total_complexity")
    mean = reader.take_decimal("mean_complexity_per_file")
    total_code_lines = reader.take_int("total_code_lines")
    duplicate_lines = reader.take_int("duplicate_lines")
    cycle_count = reader.take_int("package_cycles")
    debt_minutes = reader.take_int("debt_minutes")
    debt_days = reader.take_decimal("debt_days")

    units: list[SourceUnit] = []
    for i in range(file_count):
        prefix = f"file.{i}"
        path = reader.take(f"{prefix}.path")
        package = reader.take(f"{prefix}.package")
        imports_value = reader.take(f"{prefix}.imports")
        imports = tuple(imports_value.split(",")) if imports_value else ()
        physical = reader.take_int(f"{prefix}.physical_lines")
        code = reader.take_int(f"{prefix}.code_lines")
        comment = reader.take_int(f"{prefix}.comment_lines")
        blank = reader.take_int(f"{prefix}.blank_lines")
        function_count = reader.take_int(f"{prefix}.functions")
        functions = []
        for j in range(function_count):
            fn_prefix = f"{prefix}.fn.{j}"
            functions.append(FunctionMetric(
                name=reader.take(f"{fn_prefix}.name"),
                start_line=reader.take_int(f"{fn_prefix}.start_line"),
                effective_lines=reader.take_int(f"{fn_prefix}.effective_lines"),
                complexity=reader.take_int(f"{fn_prefix}.complexity"),
                max_nesting=reader.take_int(f"{fn_prefix}.max_nesting"),
            ))
        units.append(SourceUnit(
            path=path,
            package_name=package,
            imports=imports,
            physical_lines=physical,
            code_lines=code,
            comment_lines=comment,
            blank_lines=blank,
            functions=tuple(functions),
        ))
    reader.done()
    return MetricsReport(
        files=tuple(units),
        total_complexity=total_complexity,
        mean_complexity_per_file=mean,
        total_code_lines=total_code_lines,
        duplicate_lines=duplicate_lines,
        package_cycles=cycle_count,
        debt_minutes=debt_minutes,
        debt_days=debt_days,
    )


# -- comparison ----------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    category: str
    metric: str
    baseline: Decimal
    core: Decimal
    derived: Decimal
    combined: Decimal
    delta: Decimal


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]


_ROW_FIELDS = (
    ("Complexity", "Complexity per class", "total_complexity"),
    ("Size", "Number of Code Lines", "total_code_lines"),
    ("Design", "Package Cycles", "package_cycles"),
    ("Duplicity", "Duplicate Lines", "duplicate_lines"),
    ("Technical Debt", "Technical Debt Level", "debt_days"),
)


def compare(
    baseline: MetricsReport, core: MetricsReport, derived: MetricsReport
) -> ComparisonReport:
    """Five fixed rows; combined = core + derived, delta = combined - baseline."""
    rows = []
    for category, metric, attr in _ROW_FIELDS:
        base = Decimal(str(getattr(baseline, attr)))
        core_value = Decimal(str(getattr(core, attr)))
        derived_value = Decimal(str(getattr(derived, attr)))
        combined = core_value + derived_value
        rows.append(ComparisonRow(
            category=category,
            metric=metric,
            baseline=base,
            core=core_value,
            derived=derived_value,
            combined=combined,
            delta=combined - base,
        ))
    return ComparisonReport(tuple(rows))


def _plain(value: Decimal) -> str:
    if value == value.to_integral_value():
        return str(int(value))
    return str(value)


def _signed(value: Decimal) -> str:
    text = _plain(value)
    return f"+{text}" if value > 0 else text


_COLUMNS = ("Category", "Metric", "CWA", "SPL", "DWA", "SAWS", "Delta")


def _cells(report: ComparisonReport) -> list[tuple[str, ...]]:
    rows = [_COLUMNS]
    for row in report.rows:
        rows.append((
            row.category, row.metric,
            _plain(row.baseline), _plain(row.core), _plain(row.derived),
            _plain(row.combined), _signed(row.delta),
        ))
    return rows


def render_comparison(report: ComparisonReport) -> str:
    """Aligned text table: categories left, numbers right."""
    rows = _cells(report)
    widths = [max(len(row[i]) for row in rows) for i in range(len(_COLUMNS))]
    out = []
    for row in rows:
        cells = [row[0].ljust(widths[0]), row[1].ljust(widths[1])]
        cells += [row[i].rjust(widths[i]) for i in range(2, len(_COLUMNS))]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out) + "\n"


def comparison_key_values(report: ComparisonReport) -> str:
    """Machine-readable form: row.<category>.<column>=value lines."""
    lines = []
    for row in report.rows:
        slug = row.category.lower().replace(" ", "_")
        lines += [
            f"row.{slug}.cwa={_plain(row.baseline)}",
            f"row.{slug}.spl={_plain(row.core)}",
            f"row.{slug}.dwa={_plain(row.derived)}",
            f"row.{slug}.saws={_plain(row.combined)}",
            f"row.{slug}.delta={_plain(row.delta)}",
        ]
    return "\n".join(lines) + "\n"
