from __future__ import annotations

from splforge.metrics import detect_duplicates, scan_text


def _units(*texts):
    return [scan_text(text, f"u{i}.gsrc") for i, text in enumerate(texts)]


def _scan_dir(path):
    return [scan_text(p.read_text(), p.name) for p in sorted(path.glob("*.gsrc"))]


def test_identical_files_one_maximal_block(fixtures):
    units = _scan_dir(fixtures / "dup_pair")
    blocks, covered = detect_duplicates(units)
    assert len(blocks) == 1
    (block,) = blocks
    assert block.line_count == 10
    assert block.occurrences == (("dup_a.gsrc", 1), ("dup_b.gsrc", 1))
    assert covered == 20


def test_repeated_stanza_within_one_file(fixtures):
    units = _scan_dir(fixtures / "dup_stanza")
    blocks, covered = detect_duplicates(units)
    assert len(blocks) == 1
    (block,) = blocks
    assert block.line_count == 6
    assert block.occurrences == (("stanza.gsrc", 2), ("stanza.gsrc", 13))
    assert covered == 12


def test_clean_corpus_has_no_duplicates(fixtures):
    units = _scan_dir(fixtures / "corpus")
    blocks, covered = detect_duplicates(units)
    assert blocks == []
    assert covered == 0


def test_blocks_shorter_than_minimum_ignored():
    stanza = "a = 1\nb = 2\nc = 3\nd = 4\ne = 5\n"
    units = _units(stanza, stanza)
    blocks, covered = detect_duplicates(units)  # 5 lines < default 6
    assert blocks == []
    assert covered == 0
    blocks, covered = detect_duplicates(units, min_block=5)
    assert len(blocks) == 1
    assert covered == 10


def test_normalization_bridges_whitespace_differences():
    loose = "a  =  1\n  b = 2\nc = 3\nd = 4\ne = 5\nf   = 6\n"
    tight = "a = 1\nb = 2\nc = 3\nd = 4\ne = 5\nf = 6\n"
    blocks, covered = detect_duplicates(_units(loose, tight))
    assert len(blocks) == 1
    assert blocks[0].line_count == 6
    assert covered == 12


def test_comment_and_blank_lines_do_not_break_a_run():
    plain = "a = 1\nb = 2\nc = 3\nd = 4\ne = 5\nf = 6\n"
    chopped = "a = 1\nb = 2\n\n// aside\nc = 3\nd = 4\ne = 5\nf = 6\n"
    blocks, covered = detect_duplicates(_units(plain, chopped))
    assert len(blocks) == 1
    assert blocks[0].line_count == 6
    # physical positions differ even though normalized runs agree
    assert blocks[0].occurrences == (("u0.gsrc", 1), ("u1.gsrc", 1))
    assert covered == 12


def test_three_way_duplication_counts_every_occurrence():
    stanza = "a = 1\nb = 2\nc = 3\nd = 4\ne = 5\nf = 6\n"
    blocks, covered = detect_duplicates(_units(stanza, stanza, stanza))
    assert len(blocks) == 1
    assert len(blocks[0].occurrences) == 3
    assert covered == 18


def test_overlapping_repeats_merge_to_maximal_block():
    # twelve identical lines shared by two files: one 12-line block, not
    # seven overlapping 6-line ones
    stanza = "".join(f"x{i} = {i}\n" for i in range(12))
    blocks, covered = detect_duplicates(_units(stanza, stanza))
    assert len(blocks) == 1
    assert blocks[0].line_count == 12
    assert covered == 24


def test_result_is_independent_of_unit_order(fixtures):
    units = _scan_dir(fixtures / "dup_pair") + _scan_dir(fixtures / "dup_stanza")
    forward = detect_duplicates(units)
    backward = detect_duplicates(list(reversed(units)))
    assert forward == backward
