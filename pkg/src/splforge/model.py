"""Feature-model data types.

A feature model is a rooted tree of named features plus or/alternative
groups over sibling sets and cross-tree requires/excludes constraints.
Every feature carries the version it was introduced in and, optionally,
a binding to the implementation module that realizes it.

Instances are frozen dataclasses and are treated as immutable after
construction; analyses never mutate a model.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ModelError


class Variability(enum.Enum):
    MANDATORY = "mandatory"
    OPTIONAL = "optional"
    GROUP_MEMBER = "group-member"


class GroupKind(enum.Enum):
    ALTERNATIVE = "alt"
    OR = "or"


class ConstraintKind(enum.Enum):
    REQUIRES = "requires"
    EXCLUDES = "excludes"


class Layer(enum.Enum):
    """Architectural layer of a module binding, in canonical order."""

    XHTML = "XHTML"
    CONTROLLER = "Controller"
    SERVICE = "Service"
    DAO = "DAO"

    @property
    def code(self) -> str:
        return self.value[0]  # X, C, S, D are distinct by construction


ALL_LAYERS: tuple[Layer, ...] = tuple(Layer)

_LAYER_BY_NAME = {layer.value: layer for layer in Layer}
_LAYER_BY_CODE = {layer.code: layer for layer in Layer}


def layer_from_name(name: str) -> Layer:
    try:
        return _LAYER_BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown layer: {name}") from None


def layer_from_code(code: str) -> Layer:
    try:
        return _LAYER_BY_CODE[code]
    except KeyError:
        raise ValueError(f"unknown layer code: {code}") from None


def canonical_layers(layers) -> tuple[Layer, ...]:
    """Deduplicate and order a layer collection canonically."""
    present = set(layers)
    return tuple(layer for layer in ALL_LAYERS if layer in present)


@dataclass(frozen=True)
class AssetBinding:
    """Binding from a feature to the module that implements it."""

    module_id: str
    layers: tuple[Layer, ...] = ALL_LAYERS

    def __post_init__(self) -> None:
        if not self.module_id:
            raise ModelError("module id must be non-empty")
        if not self.layers:
            raise ModelError(f"module {self.module_id!r} must span at least one layer")
        if self.layers != canonical_layers(self.layers):
            raise ModelError(f"module {self.module_id!r} layers must be canonical and distinct")


@dataclass(frozen=True)
class Feature:
    """One node of the feature tree.

    ``parent`` is None exactly for the root. ``version`` is the release
    the feature first appears in (1-based). Features are identified by
    name; names are unique within a model.
    """

    name: str
    parent: str | None
    variability: Variability
    version: int = 1
    asset: AssetBinding | None = None

    def __post_init__(self) -> None:
        if self.version < 1:
            raise ModelError(f"feature {self.name!r} has version {self.version}, must be >= 1")


@dataclass(frozen=True)
class Group:
    """An or/alternative group over a set of sibling features."""

    name: str
    parent: str
    kind: GroupKind
    members: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.members) < 2:
            raise ModelError(f"group {self.name!r} needs at least two members")
        if len(set(self.members)) != len(self.members):
            raise ModelError(f"group {self.name!r} lists a member twice")


@dataclass(frozen=True)
class CrossTreeConstraint:
    """requires: source selected implies target selected.
    excludes: source and target never selected together.
    """

    kind: ConstraintKind
    source: str
    target: str

    def sort_key(self) -> tuple[str, str, str]:
        return (self.kind.value, self.source, self.target)


@dataclass(frozen=True)
class FeatureModel:
    """A complete feature model.

    ``features`` maps name to Feature and preserves declaration order,
    which fixes child order in the tree and the canonical serialization.
    """

    name: str
    features: dict[str, Feature]
    root: str
    groups: tuple[Group, ...] = ()
    constraints: tuple[CrossTreeConstraint, ...] = ()

    def feature(self, name: str) -> Feature:
        return self.features[name]

    def children(self, name: str) -> tuple[str, ...]:
        return tuple(f.name for f in self.features.values() if f.parent == name)

    def group_of(self, name: str) -> Group | None:
        for group in self.groups:
            if name in group.members:
                return group
        return None

    @property
    def max_version(self) -> int:
        return max(f.version for f in self.features.values())

    def tree_order(self) -> tuple[str, ...]:
        """Pre-order walk of the tree: every parent before its children."""
        order: list[str] = []
        stack = [self.root]
        while stack:
            name = stack.pop()
            order.append(name)
            stack.extend(reversed(self.children(name)))
        return tuple(order)

    def verify(self) -> None:
        """Raise ModelError on the first structural invariant violation."""
        if not self.features:
            raise ModelError("model has no features")
        if self.root not in self.features:
            raise ModelError(f"root {self.root!r} is not a declared feature")
        for name, feat in self.features.items():
            if name != feat.name:
                raise ModelError(f"feature {feat.name!r} keyed as {name!r}")
            if feat.parent is None:
                if name != self.root:
                    raise ModelError(f"feature {name!r} has no parent but is not the root")
            elif feat.parent not in self.features:
                raise ModelError(f"feature {name!r} has unknown parent {feat.parent!r}")
        root_feat = self.features[self.root]
        if root_feat.parent is not None:
            raise ModelError("root feature must have no parent")
        if root_feat.variability is not Variability.MANDATORY:
            raise ModelError("root feature must be mandatory")
        reached = set(self.tree_order())
        if len(reached) != len(self.features):
            missing = sorted(set(self.features) - reached)
            raise ModelError(f"features unreachable from root: {', '.join(missing)}")

        grouped: dict[str, str] = {}
        for group in self.groups:
            if group.parent not in self.features:
                raise ModelError(f"group {group.name!r} has unknown parent {group.parent!r}")
            for member in group.members:
                if member not in self.features:
                    raise ModelError(f"group {group.name!r} has unknown member {member!r}")
                if self.features[member].parent != group.parent:
                    raise ModelError(
                        f"group member {member!r} is not a child of {group.parent!r}"
                    )
                if self.features[member].variability is not Variability.GROUP_MEMBER:
                    raise ModelError(f"group member {member!r} must have group variability")
                if member in grouped:
                    raise ModelError(f"feature {member!r} belongs to two groups")
                grouped[member] = group.name
        for name, feat in self.features.items():
            if feat.variability is Variability.GROUP_MEMBER and name not in grouped:
                raise ModelError(f"feature {name!r} has group variability but no group")

        for constraint in self.constraints:
            for endpoint in (constraint.source, constraint.target):
                if endpoint not in self.features:
                    raise ModelError(
                        f"constraint references unknown feature {endpoint!r}"
                    )
            if constraint.source == constraint.target:
                raise ModelError(
                    f"constraint references {constraint.source!r} on both sides"
                )


def structurally_equal(a: FeatureModel, b: FeatureModel) -> bool:
    """Tree-shape model equality.

    Sibling order is part of a model's identity here (it drives
    serialization), so features are compared along the pre-order walk
    rather than by plain dataclass equality, which ignores dict order.
    How declarations happen to interleave across subtrees is not
    identity, and neither is constraint order: two models with the same
    constraints in different order are the same model.
    """
    if (a.name, a.root) != (b.name, b.root):
        return False
    order = a.tree_order()
    return (
        order == b.tree_order()
        and all(a.features[name] == b.features[name] for name in order)
        and _groups_by_tree(a, order) == _groups_by_tree(b, order)
        and sorted(a.constraints, key=CrossTreeConstraint.sort_key)
        == sorted(b.constraints, key=CrossTreeConstraint.sort_key)
    )


def _groups_by_tree(model: FeatureModel, order: tuple[str, ...]) -> list[Group]:
    """Groups re-listed parent by parent along the pre-order walk.

    Relative order of groups under one parent is kept (it shows in the
    serialized form); which parent's groups happen to be declared first
    is not.
    """
    rank = {name: i for i, name in enumerate(order)}
    return sorted(model.groups, key=lambda g: rank.get(g.parent, len(rank)))


@dataclass(frozen=True)
class Configuration:
    """A (possibly partial) decision set over a model's features.

    ``total`` records whether every feature of the model the
    configuration was built against has a decision.
    """

    selected: frozenset[str] = frozenset()
    deselected: frozenset[str] = frozenset()
    total: bool = False

    def __post_init__(self) -> None:
        overlap = self.selected & self.deselected
        if overlap:
            raise ModelError(
                f"features both selected and deselected: {', '.join(sorted(overlap))}"
            )

    @classmethod
    def for_model(cls, model: FeatureModel, selected, deselected=()) -> "Configuration":
        """Build a configuration, computing ``total`` against ``model``."""
        from .errors import UnknownFeatureError

        sel = frozenset(selected)
        desel = frozenset(deselected)
        for name in sorted((sel | desel) - set(model.features)):
            raise UnknownFeatureError(name)
        return cls(sel, desel, total=len(sel) + len(desel) == len(model.features))


@dataclass(frozen=True)
class Violation:
    """One broken constraint found by validation."""

    kind: str
    features: tuple[str, ...]
    message: str


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    violations: tuple[Violation, ...] = ()


@dataclass(frozen=True)
class PropagationResult:
    """Decisions forced by a partial configuration.

    Forced sets are disjoint from the input decisions. On conflict both
    forced sets and ``open_features`` are empty.
    """

    forced_selected: frozenset[str]
    forced_deselected: frozenset[str]
    conflict: bool
    open_features: frozenset[str]


@dataclass(frozen=True)
class ModelDiagnostics:
    """Whole-model analysis summary.

    For a void model the convention is: core empty, dead = all features,
    false-optional empty, product_count 0.
    """

    void: bool
    core_features: frozenset[str]
    dead_features: frozenset[str]
    false_optional: frozenset[str]
    product_count: int | None
