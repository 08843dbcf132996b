"""Boolean semantics and exact analyses over feature models.

The model's variability rules are compiled to a clause set (``encode``)
and every analysis is defined against that set, so validation, counting,
enumeration and propagation cannot drift apart.

Exact analyses walk the feature tree parent-first with pruning; with at
most EXACT_FEATURE_BOUND features this stays comfortably under a second
on anything the package ships. Beyond the bound, counting and
enumeration refuse, and propagation degrades to unit propagation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from .errors import ExactBoundExceededError, InvalidConfigurationError, RootRemovedError, UnknownFeatureError
from .model import (
    Configuration,
    ConstraintKind,
    Feature,
    FeatureModel,
    GroupKind,
    ModelDiagnostics,
    ModelError,
    PropagationResult,
    ValidationResult,
    Variability,
    Violation,
)

EXACT_FEATURE_BOUND = 24

# Clause kinds, used as Violation.kind and for sorting violations.
ROOT = "root"
MANDATORY_CHILD = "mandatory-child"
CHILD_PARENT = "child-parent"
OR_GROUP = "or-group"
ALT_GROUP = "alt-group"
ALT_EXCLUSION = "alt-exclusion"
REQUIRES = "requires"
EXCLUDES = "excludes"


@dataclass(frozen=True)
class Clause:
    """A disjunction of feature literals.

    ``literals`` holds (feature, positive) pairs; ``features`` repeats
    the involved feature names in reporting order (first entry is the
    one a violation is blamed on).
    """

    kind: str
    features: tuple[str, ...]
    literals: tuple[tuple[str, bool], ...]

    def satisfied_by(self, selected) -> bool:
        return any((name in selected) == positive for name, positive in self.literals)


def encode(model: FeatureModel) -> list[Clause]:
    """Compile the model's variability rules to clauses.

    A feature set S is a valid product exactly when every returned
    clause is satisfied by S. Rules, in emission order: root always
    selected; child implies parent (every non-root feature); selected
    parent implies mandatory child; selected group parent implies at
    least one member, alternatives at most one; then the cross-tree
    constraints in declaration order.
    """
    clauses: list[Clause] = [
        Clause(ROOT, (model.root,), ((model.root, True),))
    ]
    for feat in model.features.values():
        if feat.parent is None:
            continue
        clauses.append(
            Clause(CHILD_PARENT, (feat.name, feat.parent),
                   ((feat.name, False), (feat.parent, True)))
        )
        if feat.variability is Variability.MANDATORY:
            clauses.append(
                Clause(MANDATORY_CHILD, (feat.name, feat.parent),
                       ((feat.parent, False), (feat.name, True)))
            )
    for group in model.groups:
        kind = OR_GROUP if group.kind is GroupKind.OR else ALT_GROUP
        clauses.append(
            Clause(kind, (group.parent,) + group.members,
                   ((group.parent, False),) + tuple((m, True) for m in group.members))
        )
        if group.kind is GroupKind.ALTERNATIVE:
            for i, left in enumerate(group.members):
                for right in group.members[i + 1:]:
                    clauses.append(
                        Clause(ALT_EXCLUSION, (left, right),
                               ((left, False), (right, False)))
                    )
    for constraint in model.constraints:
        if constraint.kind is ConstraintKind.REQUIRES:
            clauses.append(
                Clause(REQUIRES, (constraint.source, constraint.target),
                       ((constraint.source, False), (constraint.target, True)))
            )
        else:
            clauses.append(
                Clause(EXCLUDES, (constraint.source, constraint.target),
                       ((constraint.source, False), (constraint.target, False)))
            )
    return clauses


_VIOLATION_MESSAGES = {
    ROOT: "root feature {0} must be selected",
    CHILD_PARENT: "feature {0} is selected but its parent {1} is not",
    MANDATORY_CHILD: "mandatory child {0} of selected parent {1} is not selected",
    OR_GROUP: "or group under {0} needs at least one selected member",
    ALT_GROUP: "alternative group under {0} needs exactly one selected member",
    ALT_EXCLUSION: "alternatives {0} and {1} are both selected",
    REQUIRES: "{0} requires {1}",
    EXCLUDES: "{0} excludes {1}",
}


def _check_known(model: FeatureModel, names: Iterable[str]) -> None:
    for name in sorted(set(names) - set(model.features)):
        raise UnknownFeatureError(name)


def validate(model: FeatureModel, config: Configuration) -> ValidationResult:
    """Check a total configuration against every clause of the model.

    Violations are sorted by (kind, first involved feature). A partial
    configuration is rejected with InvalidConfigurationError since
    absent decisions would make the answer meaningless.
    """
    _check_known(model, config.selected | config.deselected)
    undecided = set(model.features) - config.selected - config.deselected
    if undecided:
        raise InvalidConfigurationError(
            "configuration is partial, undecided: " + ", ".join(sorted(undecided))
        )
    violations = []
    for clause in encode(model):
        if not clause.satisfied_by(config.selected):
            message = _VIOLATION_MESSAGES[clause.kind].format(*clause.features)
            violations.append(Violation(clause.kind, clause.features, message))
    violations.sort(key=lambda v: (v.kind, v.features[0]))
    return ValidationResult(valid=not violations, violations=tuple(violations))


def _solutions(model: FeatureModel, fixed: dict[str, bool]) -> Iterator[frozenset[str]]:
    """Yield every valid product extending ``fixed``, in tree order.

    Features are assigned along a pre-order walk so a parent's value is
    known at each child, which lets whole subtrees be pruned: a
    deselected parent forces all descendants off, a selected parent
    forces mandatory children on. Group and cross-tree clauses are
    checked as soon as their last feature is assigned.
    """
    order = model.tree_order()
    position = {name: i for i, name in enumerate(order)}

    group_checks: dict[int, list] = {}
    for group in model.groups:
        last = max(position[m] for m in group.members + (group.parent,))
        group_checks.setdefault(last, []).append(group)
    constraint_checks: dict[int, list] = {}
    for constraint in model.constraints:
        last = max(position[constraint.source], position[constraint.target])
        constraint_checks.setdefault(last, []).append(constraint)

    assignment: dict[str, bool] = {}

    def consistent_at(i: int) -> bool:
        for group in group_checks.get(i, ()):
            chosen = sum(assignment[m] for m in group.members)
            if assignment[group.parent]:
                if group.kind is GroupKind.ALTERNATIVE and chosen != 1:
                    return False
                if group.kind is GroupKind.OR and chosen == 0:
                    return False
            elif chosen:
                return False
        for constraint in constraint_checks.get(i, ()):
            src = assignment[constraint.source]
            dst = assignment[constraint.target]
            if constraint.kind is ConstraintKind.REQUIRES:
                if src and not dst:
                    return False
            elif src and dst:
                return False
        return True

    def walk(i: int) -> Iterator[frozenset[str]]:
        if i == len(order):
            yield frozenset(name for name, value in assignment.items() if value)
            return
        name = order[i]
        feat = model.features[name]
        if feat.parent is None:
            allowed: tuple[bool, ...] = (True,)
        elif not assignment[feat.parent]:
            allowed = (False,)
        elif feat.variability is Variability.MANDATORY:
            allowed = (True,)
        else:
            allowed = (True, False)
        pinned = fixed.get(name)
        for value in allowed:
            if pinned is not None and value is not pinned:
                continue
            assignment[name] = value
            if consistent_at(i):
                yield from walk(i + 1)
            del assignment[name]

    return walk(0)


def _require_exact(model: FeatureModel) -> None:
    if len(model.features) > EXACT_FEATURE_BOUND:
        raise ExactBoundExceededError(len(model.features), EXACT_FEATURE_BOUND)


def count_products(model: FeatureModel) -> int:
    """Number of valid products. Exact; refuses above the feature bound."""
    _require_exact(model)
    return sum(1 for _ in _solutions(model, {}))


def enumerate_products(model: FeatureModel, limit: int | None = None) -> list[Configuration]:
    """List valid products as total configurations.

    Within the exact bound the full solution set is materialized and
    sorted by the lexicographic order of sorted selected-feature names,
    so a limit returns the first ``limit`` of the global order. Beyond
    the bound a finite limit returns the first ``limit`` products in
    deterministic tree order (then sorted); an unbounded request raises.
    """
    if limit is None:
        _require_exact(model)
        found = list(_solutions(model, {}))
    elif len(model.features) <= EXACT_FEATURE_BOUND:
        found = list(_solutions(model, {}))
    else:
        found = []
        for solution in _solutions(model, {}):
            found.append(solution)
            if len(found) >= limit:
                break
    found.sort(key=lambda s: tuple(sorted(s)))
    if limit is not None:
        found = found[:limit]
    all_features = frozenset(model.features)
    return [
        Configuration(selected=s, deselected=all_features - s, total=True)
        for s in found
    ]


def propagate(model: FeatureModel, partial: Configuration) -> PropagationResult:
    """Compute the decisions every valid extension of ``partial`` agrees on.

    Within the exact bound this is complete: a feature is reported
    forced exactly when all extensions select it (or all deselect it),
    and ``conflict`` is set exactly when no valid extension exists.
    Beyond the bound, unit propagation over the clause encoding is used
    instead; everything it reports is still sound, but some forced
    decisions may be left open and some conflicts undetected.
    """
    _check_known(model, partial.selected | partial.deselected)
    fixed = {name: True for name in partial.selected}
    fixed.update((name, False) for name in partial.deselected)

    if len(model.features) <= EXACT_FEATURE_BOUND:
        forced_on: set[str] | None = None
        forced_off: set[str] | None = None
        for solution in _solutions(model, fixed):
            off = set(model.features) - solution
            if forced_on is None:
                forced_on = set(solution)
                forced_off = off
            else:
                forced_on &= solution
                forced_off &= off
            if not forced_on and not forced_off:
                break
        if forced_on is None or forced_off is None:
            return PropagationResult(frozenset(), frozenset(), True, frozenset())
        forced_on -= partial.selected
        forced_off -= partial.deselected
    else:
        result = _unit_propagate(model, fixed)
        if result is None:
            return PropagationResult(frozenset(), frozenset(), True, frozenset())
        forced_on = {n for n, v in result.items() if v and n not in partial.selected}
        forced_off = {n for n, v in result.items() if not v and n not in partial.deselected}

    open_features = (
        set(model.features)
        - partial.selected - partial.deselected
        - forced_on - forced_off
    )
    return PropagationResult(
        frozenset(forced_on), frozenset(forced_off), False, frozenset(open_features)
    )


def _unit_propagate(model: FeatureModel, fixed: dict[str, bool]) -> dict[str, bool] | None:
    """Run unit propagation to a fixpoint; None signals a conflict."""
    assignment = dict(fixed)
    clauses = encode(model)
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            unassigned = []
            satisfied = False
            for name, positive in clause.literals:
                value = assignment.get(name)
                if value is None:
                    unassigned.append((name, positive))
                elif value == positive:
                    satisfied = True
                    break
            if satisfied:
                continue
            if not unassigned:
                return None
            if len(unassigned) == 1:
                name, positive = unassigned[0]
                assignment[name] = positive
                changed = True
    return assignment


def diagnose(model: FeatureModel) -> ModelDiagnostics:
    """Core/dead/false-optional features plus the product count.

    Exact; refuses above the feature bound. False-optional features are
    those declared optional but present in every product.
    """
    _require_exact(model)
    count = 0
    core: set[str] | None = None
    union: set[str] = set()
    for solution in _solutions(model, {}):
        count += 1
        if core is None:
            core = set(solution)
        else:
            core &= solution
        union |= solution
    if core is None:
        return ModelDiagnostics(
            void=True,
            core_features=frozenset(),
            dead_features=frozenset(model.features),
            false_optional=frozenset(),
            product_count=0,
        )
    dead = set(model.features) - union
    false_optional = {
        name for name in core
        if model.features[name].variability is Variability.OPTIONAL
    }
    return ModelDiagnostics(
        void=False,
        core_features=frozenset(core),
        dead_features=frozenset(dead),
        false_optional=frozenset(false_optional),
        product_count=count,
    )


def filter_by_version(model: FeatureModel, version: int) -> FeatureModel:
    """Restrict the model to features introduced at or before ``version``.

    Groups shrink with their members: a group down to one member
    dissolves and the survivor becomes optional, an empty group is
    dropped. Constraints survive only with both endpoints. Removing the
    root raises RootRemovedError; a surviving feature whose parent was
    removed is a model error (versions are expected to be non-decreasing
    toward the leaves).
    """
    if version < 1:
        raise ValueError(f"version must be >= 1, got {version}")
    keep = {name for name, feat in model.features.items() if feat.version <= version}
    if model.root not in keep:
        raise RootRemovedError(
            f"root {model.root!r} has version {model.features[model.root].version}, "
            f"filtering at version {version} removes it"
        )
    for name in keep:
        parent = model.features[name].parent
        if parent is not None and parent not in keep:
            raise ModelError(
                f"feature {name!r} survives version {version} but its parent {parent!r} does not"
            )

    groups = []
    dissolved: set[str] = set()
    for group in model.groups:
        members = tuple(m for m in group.members if m in keep)
        if len(members) >= 2:
            groups.append(replace(group, members=members))
        elif len(members) == 1:
            dissolved.add(members[0])

    features: dict[str, Feature] = {}
    for name, feat in model.features.items():
        if name not in keep:
            continue
        if name in dissolved:
            feat = Feature(feat.name, feat.parent, Variability.OPTIONAL,
                           feat.version, feat.asset)
        features[name] = feat

    constraints = tuple(
        c for c in model.constraints if c.source in keep and c.target in keep
    )
    filtered = FeatureModel(
        name=model.name,
        features=features,
        root=model.root,
        groups=tuple(groups),
        constraints=constraints,
    )
    filtered.verify()
    return filtered
