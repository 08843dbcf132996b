"""Directed-graph helpers: strongly connected components and topological order.

Everything here is deterministic: nodes are visited in sorted order and
ties in the topological sort are broken by name, so the same graph
always yields the same output.
"""

from __future__ import annotations

import heapq
from itertools import count
from typing import Iterable


def strongly_connected_components(
    nodes: Iterable[str], edges: Iterable[tuple[str, str]]
) -> list[list[str]]:
    """Tarjan's algorithm, iterative so deep chains cannot overflow."""
    node_list = sorted(set(nodes))
    adjacency: dict[str, list[str]] = {node: [] for node in node_list}
    for source, target in edges:
        if source in adjacency and target in adjacency:
            adjacency[source].append(target)
    for neighbors in adjacency.values():
        neighbors.sort()

    order = count()
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []

    for start in node_list:
        if start in index:
            continue
        index[start] = lowlink[start] = next(order)
        stack.append(start)
        on_stack.add(start)
        call: list[tuple[str, Iterable[str]]] = [(start, iter(adjacency[start]))]
        while call:
            node, neighbors = call[-1]
            descended = False
            for neighbor in neighbors:
                if neighbor not in index:
                    index[neighbor] = lowlink[neighbor] = next(order)
                    stack.append(neighbor)
                    on_stack.add(neighbor)
                    call.append((neighbor, iter(adjacency[neighbor])))
                    descended = True
                    break
                if neighbor in on_stack:
                    lowlink[node] = min(lowlink[node], index[neighbor])
            if descended:
                continue
            call.pop()
            if call:
                parent = call[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component: list[str] = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
    return components


def cycles(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> list[list[str]]:
    """Strongly connected components of size two or more.

    Components come back with members sorted and the list sorted by
    first member. Self-loops are not modeled (the graphs built in this
    package never contain them), so a single node is never a cycle.
    """
    found = [
        sorted(component)
        for component in strongly_connected_components(nodes, edges)
        if len(component) >= 2
    ]
    found.sort(key=lambda component: component[0])
    return found


def topological_order(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> list[str]:
    """Kahn's algorithm; an edge (a, b) means a depends on b.

    Dependencies come before dependents; among the ready nodes the
    smallest name is emitted first. Raises ValueError on a cyclic graph.
    """
    node_set = set(nodes)
    dependencies: dict[str, set[str]] = {node: set() for node in node_set}
    dependents: dict[str, set[str]] = {node: set() for node in node_set}
    for source, target in edges:
        if source in node_set and target in node_set and source != target:
            dependencies[source].add(target)
            dependents[target].add(source)

    ready = [node for node in node_set if not dependencies[node]]
    heapq.heapify(ready)
    ordered: list[str] = []
    while ready:
        node = heapq.heappop(ready)
        ordered.append(node)
        for dependent in sorted(dependents[node]):
            dependencies[dependent].discard(node)
            if not dependencies[dependent]:
                heapq.heappush(ready, dependent)
    if len(ordered) != len(node_set):
        raise ValueError("graph has a cycle, no topological order exists")
    return ordered
