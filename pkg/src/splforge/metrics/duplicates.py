"""Windowed duplicate detection over normalized code lines.

Every run of ``min_block`` consecutive effective lines (code lines,
normalized by trimming and collapsing whitespace runs) is a window;
windows with identical content occurring at two or more positions form
a duplicate group. Runs of overlapping groups are merged into maximal
blocks: group B extends group A when B's positions are exactly A's
positions shifted one line down, so a 10-line clone pasted twice
reports as one block of 10, not five blocks of 6.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scanner import SourceUnit


@dataclass(frozen=True)
class DuplicateBlock:
    """One maximal duplicated run.

    ``line_count`` counts effective lines; occurrences give the
    physical line each copy starts at, sorted by (path, line).
    """

    line_count: int
    occurrences: tuple[tuple[str, int], ...]


def detect_duplicates(
    units: list[SourceUnit], min_block: int = 6
) -> tuple[list[DuplicateBlock], int]:
    """Find maximal duplicate blocks; returns (blocks, duplicated line count).

    The line count is the number of distinct (path, physical line)
    pairs covered by any block, so overlapping occurrences within one
    file are not double-counted.
    """
    if min_block < 1:
        raise ValueError(f"min_block must be >= 1, got {min_block}")
    sequences = {unit.path: unit.effective_lines for unit in units}

    groups: dict[tuple[str, ...], list[tuple[str, int]]] = {}
    for path, lines in sorted(sequences.items()):
        texts = [text for _, text in lines]
        for start in range(len(texts) - min_block + 1):
            window = tuple(texts[start:start + min_block])
            groups.setdefault(window, []).append((path, start))

    duplicated = {
        window: frozenset(positions)
        for window, positions in groups.items()
        if len(positions) >= 2
    }
    position_group: dict[tuple[str, int], tuple[str, ...]] = {}
    for window, positions in duplicated.items():
        for position in positions:
            position_group[position] = window

    def shifted(positions: frozenset[tuple[str, int]], by: int):
        return frozenset((path, index + by) for path, index in positions)

    def neighbor(positions: frozenset[tuple[str, int]], by: int):
        """The group at all of ``positions`` shifted ``by``, if it is one group."""
        moved = shifted(positions, by)
        windows = {position_group.get(position) for position in moved}
        if len(windows) != 1 or None in windows:
            return None
        window = next(iter(windows))
        if duplicated[window] != moved:
            return None
        return window

    blocks: list[DuplicateBlock] = []
    covered: set[tuple[str, int]] = set()
    for window, positions in duplicated.items():
        if neighbor(positions, -1) is not None:
            continue  # not the head of its chain
        length = min_block
        tail = positions
        while True:
            next_window = neighbor(tail, +1)
            if next_window is None:
                break
            length += 1
            tail = duplicated[next_window]
        occurrences = []
        for path, index in sorted(positions):
            lines = sequences[path]
            occurrences.append((path, lines[index][0]))
            covered.update(
                (path, lines[index + offset][0]) for offset in range(length)
            )
        blocks.append(DuplicateBlock(length, tuple(occurrences)))

    blocks.sort(key=lambda block: block.occurrences[0])
    return blocks, len(covered)
