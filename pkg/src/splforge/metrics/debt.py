"""Remediation-cost model: fixed rulebook, minutes, eight-hour days."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .duplicates import DuplicateBlock
from .scanner import SourceUnit

MINUTES_PER_DAY = 480  # eight-hour working days
_DAY_QUANTUM = Decimal("0.1")


@dataclass(frozen=True)
class DebtRules:
    """Thresholds and charges. Defaults are the shipped rulebook."""

    long_function_lines: int = 30
    long_function_minutes: int = 20
    complexity_cap: int = 10
    complexity_minutes_per_point: int = 10
    todo_minutes: int = 10
    duplicate_block_minutes: int = 15
    nesting_cap: int = 4
    nesting_minutes: int = 15


@dataclass(frozen=True)
class DebtFinding:
    rule: str
    path: str
    line: int
    minutes: int


def minutes_to_days(minutes: int) -> Decimal:
    """Days at 480 minutes each, rounded half-up to one decimal."""
    return (Decimal(minutes) / MINUTES_PER_DAY).quantize(_DAY_QUANTUM, rounding=ROUND_HALF_UP)


def compute_debt(
    units: list[SourceUnit],
    duplicate_blocks: list[DuplicateBlock],
    rules: DebtRules = DebtRules(),
) -> tuple[list[DebtFinding], int, Decimal]:
    """Apply the rulebook; returns (findings, total minutes, days).

    Rules: a function longer than the line cap costs a flat charge; a
    function over the complexity cap costs per point above it; each
    TODO/FIXME comment mark costs a flat charge; every occurrence of a
    duplicate block beyond its first costs a flat charge; a function
    nested deeper than the cap costs a flat charge.
    """
    findings: list[DebtFinding] = []
    for unit in units:
        for function in unit.functions:
            if function.effective_lines > rules.long_function_lines:
                findings.append(DebtFinding(
                    "LongFunction", unit.path, function.start_line,
                    rules.long_function_minutes))
            if function.complexity > rules.complexity_cap:
                over = function.complexity - rules.complexity_cap
                findings.append(DebtFinding(
                    "HighComplexity", unit.path, function.start_line,
                    over * rules.complexity_minutes_per_point))
            if function.max_nesting > rules.nesting_cap:
                findings.append(DebtFinding(
                    "DeepNesting", unit.path, function.start_line,
                    rules.nesting_minutes))
        for line in unit.todos:
            findings.append(DebtFinding("TodoComment", unit.path, line, rules.todo_minutes))
    for block in duplicate_blocks:
        for path, line in block.occurrences[1:]:
            findings.append(DebtFinding(
                "DuplicatedBlock", path, line, rules.duplicate_block_minutes))
    findings.sort(key=lambda finding: (finding.path, finding.line, finding.rule))
    total = sum(finding.minutes for finding in findings)
    return findings, total, minutes_to_days(total)
