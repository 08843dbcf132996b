"""Per-file scanning: line classes, functions, complexity, nesting.

The measured language is a small curly-brace pseudo-language: ``//``
line comments, ``/* */`` block comments, single-line strings with
either quote and backslash escapes, ``package a.b.c`` and
``import a.b.c`` headers, and ``function name(...) { ... }``
definitions. Nested function definitions are not part of the language;
a ``function`` keyword inside a body is treated as ordinary code.

Line classes partition the physical lines: a line with any
non-whitespace code character (string quotes and contents included) is
code, even when a comment follows on the same line; otherwise a line
with any comment content is a comment line; otherwise blank.

Complexity is 1 + the number of decision tokens in the function body:
the keywords if/for/while/case/catch plus &&, || and ?, counted outside
strings and comments. Tokens are attributed per line, to the function
whose span covers that line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import NonUtf8InputError

_DECISION_WORD_RE = re.compile(r"\b(?:if|for|while|case|catch)\b")
_PACKAGE_RE = re.compile(r"^package\s+([A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*)\s*;?$")
_IMPORT_RE = re.compile(r"^import\s+([A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*)\s*;?$")
_FUNCTION_RE = re.compile(r"\bfunction\s+([A-Za-z_][A-Za-z0-9_]*)\s*\(")
_TODO_RE = re.compile(r"\b(?:TODO|FIXME)\b")


@dataclass(frozen=True)
class FunctionMetric:
    name: str
    start_line: int
    effective_lines: int  # code lines within the function's span
    complexity: int
    max_nesting: int  # brace depth inside the body, 0 for a flat body


@dataclass(frozen=True)
class SourceUnit:
    """Scan result for one file.

    ``effective_lines`` (physical line number, normalized text of each
    code line) and ``todos`` (line numbers of TODO/FIXME comment marks)
    are carried for the later pipeline stages; both are scan byproducts
    excluded from equality and absent from the serialized report.
    """

    path: str
    package_name: str
    imports: tuple[str, ...]
    physical_lines: int
    code_lines: int
    comment_lines: int
    blank_lines: int
    functions: tuple[FunctionMetric, ...]
    effective_lines: tuple[tuple[int, str], ...] = field(
        default=(), compare=False, repr=False)
    todos: tuple[int, ...] = field(default=(), compare=False, repr=False)


@dataclass
class _Line:
    number: int
    raw: str
    has_code: bool = False
    has_comment: bool = False
    code: str = ""  # code chars only, string contents blanked
    comment: str = ""  # comment text, markers excluded


def _split_lines(text: str) -> list[str]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line[:-1] if line.endswith("\r") else line for line in lines]


def _classify(text: str) -> list[_Line]:
    """One pass over the file, tracking comment and string state."""
    lines: list[_Line] = []
    in_block_comment = False
    for number, raw in enumerate(_split_lines(text), start=1):
        line = _Line(number, raw)
        code_chars: list[str] = []
        comment_chars: list[str] = []
        in_string: str | None = None
        escaped = False
        i = 0
        while i < len(raw):
            char = raw[i]
            if in_block_comment:
                if raw.startswith("*/", i):
                    in_block_comment = False
                    line.has_comment = True
                    i += 2
                    continue
                if not char.isspace():
                    line.has_comment = True
                comment_chars.append(char)
                i += 1
                continue
            if in_string is not None:
                line.has_code = True
                if escaped:
                    escaped = False
                elif char == "\\":
                    escaped = True
                elif char == in_string:
                    in_string = None
                    code_chars.append(char)
                i += 1
                continue
            if raw.startswith("//", i):
                line.has_comment = True
                comment_chars.append(raw[i + 2:])
                break
            if raw.startswith("/*", i):
                in_block_comment = True
                line.has_comment = True
                i += 2
                continue
            if char in "\"'":
                in_string = char
                line.has_code = True
                code_chars.append(char)
                i += 1
                continue
            if not char.isspace():
                line.has_code = True
            code_chars.append(char)
            i += 1
        # strings do not span lines; an unterminated one ends with its line
        line.code = "".join(code_chars)
        line.comment = "".join(comment_chars)
        lines.append(line)
    return lines


def _decision_tokens(code: str) -> int:
    return (len(_DECISION_WORD_RE.findall(code))
            + code.count("&&") + code.count("||") + code.count("?"))


def _find_functions(lines: list[_Line]) -> list[FunctionMetric]:
    functions: list[FunctionMetric] = []
    depth = 0
    current: dict | None = None
    waiting_for_body = False
    for line in lines:
        if current is None:
            match = _FUNCTION_RE.search(line.code)
            if match:
                current = {
                    "name": match.group(1),
                    "start": line.number,
                    "tokens": 0,
                    "max_nesting": 0,
                    "body_depth": 0,
                }
                waiting_for_body = True
        if current is not None:
            current["tokens"] += _decision_tokens(line.code)
        closed_at: int | None = None
        for char in line.code:
            if char == "{":
                depth += 1
                if current is not None and waiting_for_body:
                    current["body_depth"] = depth
                    waiting_for_body = False
                elif current is not None and closed_at is None:
                    nesting = depth - current["body_depth"]
                    if nesting > current["max_nesting"]:
                        current["max_nesting"] = nesting
            elif char == "}":
                depth -= 1
                if current is not None and not waiting_for_body and depth < current["body_depth"]:
                    closed_at = line.number
        if current is not None and closed_at is not None:
            effective = sum(
                1 for l in lines
                if current["start"] <= l.number <= closed_at and l.has_code
            )
            functions.append(FunctionMetric(
                name=current["name"],
                start_line=current["start"],
                effective_lines=effective,
                complexity=1 + current["tokens"],
                max_nesting=current["max_nesting"],
            ))
            current = None
    if current is not None:
        # unbalanced braces: let the span run to the end of the input
        effective = sum(1 for l in lines if l.number >= current["start"] and l.has_code)
        functions.append(FunctionMetric(
            name=current["name"],
            start_line=current["start"],
            effective_lines=effective,
            complexity=1 + current["tokens"],
            max_nesting=current["max_nesting"],
        ))
    return functions


def _normalize(raw: str) -> str:
    return re.sub(r"\s+", " ", raw.strip())


def scan_text(text: str, path: str) -> SourceUnit:
    lines = _classify(text)
    code_lines = [l for l in lines if l.has_code]
    comment_only = [l for l in lines if not l.has_code and l.has_comment]

    package_name = ""
    if code_lines:
        match = _PACKAGE_RE.match(code_lines[0].code.strip())
        if match:
            package_name = match.group(1)
    imports = tuple(
        match.group(1)
        for line in code_lines
        if (match := _IMPORT_RE.match(line.code.strip()))
    )
    todos = tuple(
        line.number
        for line in lines
        for _ in _TODO_RE.finditer(line.comment)
    )
    return SourceUnit(
        path=path,
        package_name=package_name,
        imports=imports,
        physical_lines=len(lines),
        code_lines=len(code_lines),
        comment_lines=len(comment_only),
        blank_lines=len(lines) - len(code_lines) - len(comment_only),
        functions=tuple(_find_functions(lines)),
        effective_lines=tuple((l.number, _normalize(l.raw)) for l in code_lines),
        todos=todos,
    )


def scan_file(data: bytes, path: str) -> SourceUnit:
    """Scan one file's bytes; input must be UTF-8."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise NonUtf8InputError(path) from None
    return scan_text(text, path)
