from __future__ import annotations

import pytest

from splforge.errors import NonUtf8InputError
from splforge.metrics import scan_file, scan_text


def test_sample1_hand_counts(fixtures):
    unit = scan_text((fixtures / "corpus" / "sample1.gsrc").read_text(), "sample1.gsrc")
    assert unit.physical_lines == 20
    assert unit.blank_lines == 3
    assert unit.comment_lines == 4
    assert unit.code_lines == 13
    assert unit.package_name == "com.acme.inventory"
    assert unit.imports == ("com.acme.store", "com.acme.web")
    assert [f.name for f in unit.functions] == ["restock", "stockLevel"]
    restock, stock_level = unit.functions
    assert (restock.start_line, restock.effective_lines) == (9, 9)
    assert (restock.complexity, restock.max_nesting) == (4, 1)
    # one-liner body: the header line is the only code line
    assert (stock_level.start_line, stock_level.effective_lines) == (20, 1)
    assert (stock_level.complexity, stock_level.max_nesting) == (1, 0)
    assert unit.todos == (19,)


def test_line_partition_holds_for_corpus(fixtures):
    for path in sorted((fixtures / "corpus").glob("*.gsrc")):
        unit = scan_text(path.read_text(), path.name)
        total = unit.code_lines + unit.comment_lines + unit.blank_lines
        assert total == unit.physical_lines, path.name


def test_gnarly_complexity_counts_every_decision_token(fixtures):
    unit = scan_text((fixtures / "corpus" / "gnarly.gsrc").read_text(), "gnarly.gsrc")
    (screen,) = unit.functions
    assert screen.complexity == 13
    assert screen.max_nesting == 2


def test_trailing_comment_line_counts_as_code():
    unit = scan_text("function f() {\n  go()  // fire\n}\n", "x.gsrc")
    assert (unit.code_lines, unit.comment_lines) == (3, 0)


def test_block_comment_spans_lines():
    text = "/* one\ntwo\nthree */\ncall()\n"
    unit = scan_text(text, "x.gsrc")
    assert (unit.comment_lines, unit.code_lines, unit.blank_lines) == (3, 1, 0)


def test_lone_block_comment_close_is_a_comment_line():
    text = "/*\nnote\n*/\n"
    unit = scan_text(text, "x.gsrc")
    assert unit.comment_lines == 3


def test_decision_tokens_inside_strings_do_not_count():
    text = 'function f() {\n  return "if && while ?"\n}\n'
    unit = scan_text(text, "x.gsrc")
    assert unit.functions[0].complexity == 1


def test_decision_tokens_inside_comments_do_not_count():
    text = "function f() {\n  go()  // if a || b ? retry\n  /* while */\n}\n"
    unit = scan_text(text, "x.gsrc")
    assert unit.functions[0].complexity == 1


def test_identifier_containing_keyword_does_not_count():
    text = "function f() {\n  gift = modifier(catchall)\n}\n"
    unit = scan_text(text, "x.gsrc")
    assert unit.functions[0].complexity == 1


def test_string_escapes_do_not_end_the_string():
    text = 'function f() {\n  say("a \\" if b")\n}\n'
    unit = scan_text(text, "x.gsrc")
    assert unit.functions[0].complexity == 1
    assert unit.code_lines == 3


def test_todo_and_fixme_only_in_comments():
    text = ('// TODO first\n/* FIXME second */\nfunction f() {\n'
            '  todo = "TODO not here"\n  run()  // TODO third\n}\n')
    unit = scan_text(text, "x.gsrc")
    assert unit.todos == (1, 2, 5)


def test_package_read_from_first_code_line_only():
    text = "// package com.wrong\nfunction f() {\n}\npackage com.late\n"
    unit = scan_text(text, "x.gsrc")
    assert unit.package_name == ""


def test_nested_functions_are_not_modeled_but_braces_balance():
    text = ("function outer(a) {\n  if (a) {\n    if (b) {\n      deep()\n"
            "    }\n  }\n}\n")
    unit = scan_text(text, "x.gsrc")
    (outer,) = unit.functions
    assert outer.max_nesting == 2
    assert outer.effective_lines == 7


def test_unclosed_function_runs_to_end_of_file():
    unit = scan_text("function f() {\n  go()\n", "x.gsrc")
    (f,) = unit.functions
    assert f.effective_lines == 2


def test_empty_text():
    unit = scan_text("", "empty.gsrc")
    assert unit.physical_lines == 0
    assert unit.functions == ()
    assert unit.package_name == ""


def test_scan_file_rejects_non_utf8(tmp_path):
    target = tmp_path / "bad.gsrc"
    target.write_bytes(b"function f() {\n \xff\n}\n")
    with pytest.raises(NonUtf8InputError):
        scan_file(target.read_bytes(), str(target))


def test_crlf_input_scans_like_lf():
    lf = scan_text("function f() {\n  go()\n}\n", "x.gsrc")
    crlf = scan_text("function f() {\r\n  go()\r\n}\r\n", "x.gsrc")
    assert lf.code_lines == crlf.code_lines
    assert lf.functions == crlf.functions
