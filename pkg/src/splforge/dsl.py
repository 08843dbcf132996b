"""Text formats for feature models and configurations.

Model format (.fm)::

    model Store
    feature Store => module "store" {
      mandatory feature Catalog => module "catalog" layer Service,DAO
      optional feature Export @v2 => module "export"
      or group Payment { Card, Invoice }
      feature Card
      feature Invoice
    }
    requires Export Catalog

One root declaration follows the ``model`` header. A declaration is
``[mandatory|optional] feature NAME [@vN] [=> module "ID" [layer L,...]]``
followed by an optional braced block holding group headers and child
declarations. Group members are declared as plain ``feature`` lines in
the same block; they take their variability from the group, so they
carry no marker. The root carries no marker either; every other
ungrouped feature needs one. Omitting the layer clause binds the module
to all four layers. Cross-tree constraints come last, one per line
(``requires A B`` or ``excludes A B``); a newline terminates them, but
everything else is whitespace-insensitive.

Configuration format (.cfg): one decision per line, ``+Name`` selects
and ``-Name`` deselects; blank lines and ``#`` comments are skipped.

``parse_model``/``parse_configuration`` raise ParseFailure carrying a
list of Diagnostic values (file:line:column positions and stable error
codes). Syntax errors stop the parse at the first problem; semantic
errors are collected so one run reports them all.

``serialize_model`` emits the canonical form: two-space indentation,
children in declaration order, group headers before child declarations,
version suffix omitted at v1, layer clause omitted when a binding spans
all layers, constraints last sorted by (kind, source, target), trailing
newline. Parsing canonical output reproduces the model exactly.
"""

from __future__ import annotations

import functools
import importlib.resources
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseFailure
from .model import (
    ALL_LAYERS,
    AssetBinding,
    Configuration,
    ConstraintKind,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    Group,
    GroupKind,
    Variability,
    layer_from_name,
)

E_UNKNOWN_FEATURE = "E001"
E_SYNTAX = "E002"
E_DUPLICATE_FEATURE = "E003"
E_MULTIPLE_ROOTS = "E004"
E_SELF_REFERENCE = "E005"
E_GROUP_MEMBERSHIP = "E006"
E_GROUP_SIZE = "E007"
E_MARKER = "E008"
E_DUPLICATE_DECISION = "E009"
E_BAD_VERSION = "E010"


@dataclass(frozen=True)
class Diagnostic:
    file: str
    line: int
    column: int
    code: str
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}: {self.severity} {self.code}: {self.message}"


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int
    value: object = None


_TOKEN_RE = re.compile(
    r"""
      (?P<space>[ \t]+)
    | (?P<newline>\n)
    | (?P<version>@v(?P<vnum>\d+))
    | (?P<arrow>=>)
    | (?P<string>"(?P<sval>[^"\n]*)")
    | (?P<badstring>"[^"\n]*)
    | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
    | (?P<lbrace>\{)
    | (?P<rbrace>\})
    | (?P<comma>,)
    """,
    re.VERBOSE,
)


class _Abort(Exception):
    """Internal: stop parsing after a fatal (syntax-level) diagnostic."""


class _Parser:
    def __init__(self, text: str, filename: str) -> None:
        self.filename = filename
        self.text = text.replace("\r\n", "\n")
        self.diagnostics: list[Diagnostic] = []
        self.tokens: list[_Token] = []
        self.pos = 0
        # parse products, assembled into a FeatureModel at the end
        self.model_name = ""
        self.decls: list[dict] = []
        self.decl_index: dict[str, dict] = {}
        self.groups: list[dict] = []
        self.raw_constraints: list[dict] = []

    # -- diagnostics ----------------------------------------------------

    def _diag(self, token: _Token, code: str, message: str) -> None:
        self.diagnostics.append(
            Diagnostic(self.filename, token.line, token.column, code, message)
        )

    def _fatal(self, token: _Token, message: str, code: str = E_SYNTAX) -> None:
        self._diag(token, code, message)
        raise _Abort()

    # -- tokenizer ------------------------------------------------------

    _TOKEN_KINDS = ("space", "newline", "version", "arrow", "string",
                    "badstring", "ident", "lbrace", "rbrace", "comma")

    def _tokenize(self, text: str) -> list[_Token]:
        tokens: list[_Token] = []
        line, line_start = 1, 0
        pos = 0
        while pos < len(text):
            match = _TOKEN_RE.match(text, pos)
            if match is None:
                bad = _Token("error", text[pos], line, pos - line_start + 1)
                self._diag(bad, E_SYNTAX, f"unexpected character {text[pos]!r}")
                raise _Abort()
            kind = next(k for k in self._TOKEN_KINDS if match.group(k) is not None)
            column = match.start() - line_start + 1
            if kind == "badstring":
                self._diag(_Token("error", "", line, column), E_SYNTAX, "unterminated string")
                raise _Abort()
            if kind == "version":
                value: object = int(match.group("vnum"))
            elif kind == "string":
                value = match.group("sval")
            else:
                value = None
            if kind != "space":
                tokens.append(_Token(kind, match.group(), line, column, value))
            if kind == "newline":
                line += 1
                line_start = match.end()
            pos = match.end()
        tokens.append(_Token("eof", "", line, pos - line_start + 1))
        return tokens

    # -- token stream helpers --------------------------------------------

    def _peek(self, skip_newlines: bool = True) -> _Token:
        pos = self.pos
        if skip_newlines:
            while self.tokens[pos].kind == "newline":
                pos += 1
        return self.tokens[pos]

    def _take(self, skip_newlines: bool = True) -> _Token:
        if skip_newlines:
            while self.tokens[self.pos].kind == "newline":
                self.pos += 1
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    @staticmethod
    def _shown(token: _Token) -> str:
        if token.kind == "eof":
            return "end of input"
        if token.kind == "newline":
            return "end of line"
        return repr(token.text)

    def _expect(self, kind: str, what: str, skip_newlines: bool = True) -> _Token:
        token = self._take(skip_newlines)
        if token.kind != kind:
            self._fatal(token, f"expected {what}, found {self._shown(token)}")
        return token

    def _expect_keyword(self, word: str) -> _Token:
        token = self._take()
        if token.kind != "ident" or token.text != word:
            self._fatal(token, f"expected {word!r}, found {self._shown(token)}")
        return token

    # -- grammar ----------------------------------------------------------

    def parse(self) -> FeatureModel:
        try:
            self.tokens = self._tokenize(self.text)
            self._expect_keyword("model")
            self.model_name = self._expect("ident", "model name").text
            self._parse_decl(parent=None)
            while True:
                token = self._peek()
                if token.kind == "eof":
                    break
                if token.kind == "ident" and token.text in ("requires", "excludes"):
                    self._parse_constraint()
                elif token.kind == "ident" and token.text in ("feature", "mandatory", "optional"):
                    self._fatal(token, "a model has exactly one root feature", E_MULTIPLE_ROOTS)
                else:
                    self._fatal(token, f"expected a constraint or end of input, found {self._shown(token)}")
        except _Abort:
            # syntax errors stop the parse; everything later would be noise
            raise ParseFailure(self.diagnostics) from None
        return self._assemble()

    def _parse_decl(self, parent: str | None) -> None:
        marker: _Token | None = None
        first = self._peek()
        if first.kind == "ident" and first.text in ("mandatory", "optional"):
            marker = self._take()
        self._expect_keyword("feature")
        name = self._expect("ident", "feature name")

        version: _Token | None = None
        if self._peek().kind == "version":
            version = self._take()

        asset: dict | None = None
        if self._peek().kind == "arrow":
            self._take()
            self._expect_keyword("module")
            module = self._expect("string", "module id string")
            layers: list[_Token] = []
            nxt = self._peek()
            if nxt.kind == "ident" and nxt.text == "layer":
                self._take()
                layers.append(self._expect("ident", "layer name"))
                while self._peek().kind == "comma":
                    self._take()
                    layers.append(self._expect("ident", "layer name"))
            asset = {"module": module, "layers": layers}

        decl = {
            "name": name,
            "marker": marker,
            "version": version,
            "asset": asset,
            "parent": parent,
            "member_of": None,
        }
        if name.text in self.decl_index:
            self._diag(name, E_DUPLICATE_FEATURE, f"feature {name.text!r} is already declared")
        else:
            self.decl_index[name.text] = decl
            self.decls.append(decl)

        if self._peek().kind == "lbrace":
            self._take()
            self._parse_block(name.text)

    def _parse_block(self, parent: str) -> None:
        while True:
            token = self._peek()
            if token.kind == "rbrace":
                self._take()
                return
            if token.kind == "eof":
                self._fatal(token, f"block of {parent!r} is not closed")
            if token.kind == "ident" and token.text in ("feature", "mandatory", "optional"):
                self._parse_decl(parent)
            elif token.kind == "ident" and token.text in ("alt", "or"):
                self._parse_group(parent)
            else:
                self._fatal(token, f"expected a feature or group declaration, found {token.text!r}")

    def _parse_group(self, parent: str) -> None:
        kind = self._take()
        self._expect_keyword("group")
        name = self._expect("ident", "group name")
        self._expect("lbrace", "'{'")
        members = [self._expect("ident", "group member name")]
        while self._peek().kind == "comma":
            self._take()
            members.append(self._expect("ident", "group member name"))
        self._expect("rbrace", "'}'")
        self.groups.append(
            {"kind": kind, "name": name, "parent": parent, "members": members}
        )

    def _parse_constraint(self) -> None:
        kind = self._take()
        source = self._expect("ident", "feature name", skip_newlines=False)
        target = self._expect("ident", "feature name", skip_newlines=False)
        trailing = self.tokens[self.pos]
        if trailing.kind not in ("newline", "eof"):
            self._fatal(trailing, "a constraint names exactly two features per line")
        self.raw_constraints.append({"kind": kind, "source": source, "target": target})

    # -- assembly ----------------------------------------------------------

    def _assemble(self) -> FeatureModel:
        # group membership first: it decides which declarations need markers
        seen_members: dict[str, _Token] = {}
        groups: list[Group] = []
        for raw in self.groups:
            members: list[str] = []
            for member in raw["members"]:
                decl = self.decl_index.get(member.text)
                if decl is None:
                    self._diag(member, E_UNKNOWN_FEATURE,
                               f"group member {member.text!r} is not declared")
                    continue
                if decl["parent"] != raw["parent"]:
                    self._diag(member, E_GROUP_MEMBERSHIP,
                               f"group member {member.text!r} is not a child of {raw['parent']!r}")
                    continue
                if member.text in seen_members:
                    self._diag(member, E_GROUP_MEMBERSHIP,
                               f"feature {member.text!r} already belongs to a group")
                    continue
                if member.text in members:
                    self._diag(member, E_GROUP_MEMBERSHIP,
                               f"group member {member.text!r} listed twice")
                    continue
                members.append(member.text)
                decl["member_of"] = raw["name"].text
            for member in members:
                seen_members[member] = raw["name"]
            if len(members) < 2:
                self._diag(raw["name"], E_GROUP_SIZE,
                           f"group {raw['name'].text!r} needs at least two members")
                continue
            kind = GroupKind.OR if raw["kind"].text == "or" else GroupKind.ALTERNATIVE
            groups.append(Group(raw["name"].text, raw["parent"], kind, tuple(members)))

        features: dict[str, Feature] = {}
        for decl in self.decls:
            name = decl["name"].text
            marker = decl["marker"]
            if decl["parent"] is None:
                if marker is not None:
                    self._diag(marker, E_MARKER, "the root feature takes no marker")
                variability = Variability.MANDATORY
            elif decl["member_of"] is not None:
                if marker is not None:
                    self._diag(marker, E_MARKER,
                               f"group member {name!r} takes no marker")
                variability = Variability.GROUP_MEMBER
            elif marker is None:
                self._diag(decl["name"], E_MARKER,
                           f"feature {name!r} needs a mandatory or optional marker")
                variability = Variability.OPTIONAL
            else:
                variability = (Variability.MANDATORY if marker.text == "mandatory"
                               else Variability.OPTIONAL)

            version = 1
            if decl["version"] is not None:
                version = decl["version"].value
                if version < 1:
                    self._diag(decl["version"], E_BAD_VERSION, "versions start at 1")
                    version = 1

            asset = None
            if decl["asset"] is not None:
                module = decl["asset"]["module"]
                if not module.value:
                    self._diag(module, E_SYNTAX, "module id must not be empty")
                layers: list = []
                for token in decl["asset"]["layers"]:
                    try:
                        layer = layer_from_name(token.text)
                    except ValueError:
                        self._diag(token, E_SYNTAX, f"unknown layer {token.text!r}")
                        continue
                    if layer in layers:
                        self._diag(token, E_SYNTAX, f"layer {token.text!r} listed twice")
                        continue
                    layers.append(layer)
                if decl["asset"]["layers"] and not layers:
                    layers = list(ALL_LAYERS)  # all names were bad; keep assembling
                if module.value:
                    asset = AssetBinding(
                        module.value,
                        tuple(l for l in ALL_LAYERS if l in layers) if layers else ALL_LAYERS,
                    )
            features[name] = Feature(name, decl["parent"], variability, version, asset)

        constraints: list[CrossTreeConstraint] = []
        for raw in self.raw_constraints:
            source, target = raw["source"], raw["target"]
            ok = True
            for endpoint in (source, target):
                if endpoint.text not in self.decl_index:
                    self._diag(endpoint, E_UNKNOWN_FEATURE,
                               f"constraint references unknown feature {endpoint.text!r}")
                    ok = False
            if ok and source.text == target.text:
                self._diag(source, E_SELF_REFERENCE,
                           f"constraint references {source.text!r} on both sides")
                ok = False
            if ok:
                kind = (ConstraintKind.REQUIRES if raw["kind"].text == "requires"
                        else ConstraintKind.EXCLUDES)
                constraints.append(CrossTreeConstraint(kind, source.text, target.text))

        if self.diagnostics:
            raise ParseFailure(self.diagnostics)
        model = FeatureModel(
            name=self.model_name,
            features=features,
            root=self.decls[0]["name"].text,
            groups=tuple(groups),
            constraints=tuple(constraints),
        )
        model.verify()
        return model


def parse_model(text: str, filename: str = "<model>") -> FeatureModel:
    """Parse .fm text; raises ParseFailure with diagnostics on any error."""
    parser = _Parser(text, filename)
    try:
        return parser.parse()
    except _Abort:
        raise ParseFailure(parser.diagnostics) from None


def serialize_model(model: FeatureModel) -> str:
    """Emit the canonical text form; see the module docstring."""
    lines = [f"model {model.name}"]
    _emit_decl(model, model.root, 0, lines)
    for constraint in sorted(model.constraints, key=CrossTreeConstraint.sort_key):
        lines.append(f"{constraint.kind.value} {constraint.source} {constraint.target}")
    return "\n".join(lines) + "\n"


def _emit_decl(model: FeatureModel, name: str, depth: int, lines: list[str]) -> None:
    feat = model.features[name]
    parts = []
    if feat.parent is not None and feat.variability is not Variability.GROUP_MEMBER:
        parts.append(feat.variability.value)
    parts.append("feature")
    parts.append(name)
    if feat.version != 1:
        parts.append(f"@v{feat.version}")
    if feat.asset is not None:
        parts.append(f'=> module "{feat.asset.module_id}"')
        if feat.asset.layers != ALL_LAYERS:
            parts.append("layer " + ",".join(layer.value for layer in feat.asset.layers))
    indent = "  " * depth
    groups = [g for g in model.groups if g.parent == name]
    children = model.children(name)
    if groups or children:
        lines.append(indent + " ".join(parts) + " {")
        for group in groups:
            members = ", ".join(group.members)
            lines.append("  " * (depth + 1) + f"{group.kind.value} group {group.name} {{ {members} }}")
        for child in children:
            _emit_decl(model, child, depth + 1, lines)
        lines.append(indent + "}")
    else:
        lines.append(indent + " ".join(parts))


_DECISION_RE = re.compile(r"([+-])([A-Za-z][A-Za-z0-9_]*)")


def parse_configuration(text: str, model: FeatureModel, filename: str = "<config>") -> Configuration:
    """Parse .cfg text against ``model``.

    Unknown names, malformed lines and repeated decisions are collected
    into a ParseFailure. ``total`` is set when every feature of the
    model has a decision.
    """
    diagnostics: list[Diagnostic] = []
    selected: set[str] = set()
    deselected: set[str] = set()
    decided: dict[str, int] = {}
    for lineno, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        column = len(raw) - len(raw.lstrip()) + 1
        match = _DECISION_RE.fullmatch(line)
        if match is None:
            diagnostics.append(Diagnostic(filename, lineno, column, E_SYNTAX,
                                          "expected +Name or -Name"))
            continue
        name = match.group(2)
        if name not in model.features:
            diagnostics.append(Diagnostic(filename, lineno, column + 1, E_UNKNOWN_FEATURE,
                                          f"unknown feature: {name}"))
        elif name in decided:
            diagnostics.append(Diagnostic(filename, lineno, column + 1, E_DUPLICATE_DECISION,
                                          f"feature {name!r} already decided on line {decided[name]}"))
        else:
            decided[name] = lineno
            (selected if match.group(1) == "+" else deselected).add(name)
    if diagnostics:
        raise ParseFailure(diagnostics)
    return Configuration(
        frozenset(selected),
        frozenset(deselected),
        total=len(decided) == len(model.features),
    )


def serialize_configuration(config: Configuration) -> str:
    """One decision per line, selections first, both halves sorted."""
    lines = [f"+{name}" for name in sorted(config.selected)]
    lines += [f"-{name}" for name in sorted(config.deselected)]
    return "\n".join(lines) + "\n" if lines else ""


def reference_model_path() -> Path:
    """Path of the packaged reference model (a small web-portal line)."""
    return Path(importlib.resources.files("splforge") / "fixtures" / "webspl.fm")


@functools.lru_cache(maxsize=1)
def reference_model() -> FeatureModel:
    path = reference_model_path()
    return parse_model(path.read_text(encoding="utf-8"), filename=path.name)
