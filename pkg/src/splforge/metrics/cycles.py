"""Package dependency cycles across a scanned corpus."""

from __future__ import annotations

from .. import graphs
from .scanner import SourceUnit


def package_cycles(units: list[SourceUnit]) -> tuple[int, list[list[str]]]:
    """Count dependency cycles between the corpus's own packages.

    Nodes are the declared package names; an import only adds an edge
    when it targets another package of the corpus, so external imports
    never create cycles. Returns (cycle count, cycle groups sorted).
    """
    nodes = {unit.package_name for unit in units if unit.package_name}
    edges = {
        (unit.package_name, imported)
        for unit in units
        if unit.package_name
        for imported in unit.imports
        if imported in nodes and imported != unit.package_name
    }
    groups = graphs.cycles(nodes, edges)
    return len(groups), groups
