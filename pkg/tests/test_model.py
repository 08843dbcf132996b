from __future__ import annotations

import pytest

from splforge.errors import ModelError, UnknownFeatureError
from splforge.model import (
    ALL_LAYERS,
    AssetBinding,
    Configuration,
    ConstraintKind,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    Group,
    GroupKind,
    Layer,
    Variability,
    canonical_layers,
    layer_from_code,
    layer_from_name,
    structurally_equal,
)


def _tiny(**overrides) -> FeatureModel:
    features = {
        "A": Feature("A", None, Variability.MANDATORY),
        "B": Feature("B", "A", Variability.OPTIONAL),
    }
    base = dict(name="T", features=features, root="A", groups=(), constraints=())
    base.update(overrides)
    return FeatureModel(**base)


def test_verify_accepts_minimal_model():
    _tiny().verify()


def test_verify_rejects_unknown_root():
    with pytest.raises(ModelError, match="root"):
        _tiny(root="Z").verify()


def test_verify_rejects_unknown_parent():
    features = {
        "A": Feature("A", None, Variability.MANDATORY),
        "B": Feature("B", "Nope", Variability.OPTIONAL),
    }
    with pytest.raises(ModelError, match="unknown parent"):
        _tiny(features=features).verify()


def test_verify_rejects_second_parentless_feature():
    features = {
        "A": Feature("A", None, Variability.MANDATORY),
        "B": Feature("B", None, Variability.OPTIONAL),
    }
    with pytest.raises(ModelError, match="not the root"):
        _tiny(features=features).verify()


def test_verify_rejects_optional_root():
    features = {"A": Feature("A", None, Variability.OPTIONAL)}
    with pytest.raises(ModelError, match="mandatory"):
        _tiny(features=features).verify()


def test_verify_rejects_parent_cycle():
    features = {
        "A": Feature("A", None, Variability.MANDATORY),
        "B": Feature("B", "C", Variability.OPTIONAL),
        "C": Feature("C", "B", Variability.OPTIONAL),
    }
    with pytest.raises(ModelError, match="unreachable"):
        _tiny(features=features).verify()


def test_verify_rejects_member_without_group_variability():
    features = {
        "A": Feature("A", None, Variability.MANDATORY),
        "B": Feature("B", "A", Variability.OPTIONAL),
        "C": Feature("C", "A", Variability.GROUP_MEMBER),
        "D": Feature("D", "A", Variability.GROUP_MEMBER),
    }
    groups = (Group("G", "A", GroupKind.OR, ("B", "C")),)
    with pytest.raises(ModelError, match="group variability"):
        _tiny(features=features, groups=groups).verify()


def test_verify_rejects_member_in_two_groups():
    features = {
        "A": Feature("A", None, Variability.MANDATORY),
        "B": Feature("B", "A", Variability.GROUP_MEMBER),
        "C": Feature("C", "A", Variability.GROUP_MEMBER),
    }
    groups = (
        Group("G1", "A", GroupKind.OR, ("B", "C")),
        Group("G2", "A", GroupKind.ALTERNATIVE, ("B", "C")),
    )
    with pytest.raises(ModelError, match="two groups"):
        _tiny(features=features, groups=groups).verify()


def test_verify_rejects_self_referential_constraint():
    constraints = (CrossTreeConstraint(ConstraintKind.REQUIRES, "B", "B"),)
    with pytest.raises(ModelError, match="both sides"):
        _tiny(constraints=constraints).verify()


def test_group_needs_two_members():
    with pytest.raises(ModelError):
        Group("G", "A", GroupKind.OR, ("B",))
    with pytest.raises(ModelError):
        Group("G", "A", GroupKind.OR, ("B", "B"))


def test_feature_version_must_be_positive():
    with pytest.raises(ModelError):
        Feature("A", None, Variability.MANDATORY, version=0)


def test_asset_binding_checks():
    with pytest.raises(ModelError):
        AssetBinding("")
    with pytest.raises(ModelError):
        AssetBinding("m", ())
    with pytest.raises(ModelError):
        AssetBinding("m", (Layer.DAO, Layer.XHTML))  # out of canonical order
    assert AssetBinding("m").layers == ALL_LAYERS


def test_layer_lookup():
    assert layer_from_name("XHTML") is Layer.XHTML
    assert layer_from_code("D") is Layer.DAO
    assert [l.code for l in ALL_LAYERS] == ["X", "C", "S", "D"]
    assert canonical_layers([Layer.DAO, Layer.XHTML]) == (Layer.XHTML, Layer.DAO)
    with pytest.raises(ValueError):
        layer_from_name("Web")
    with pytest.raises(ValueError):
        layer_from_code("Z")


def test_configuration_rejects_overlap():
    with pytest.raises(ModelError, match="both"):
        Configuration(frozenset({"A"}), frozenset({"A"}))


def test_configuration_for_model_totality():
    model = _tiny()
    partial = Configuration.for_model(model, {"A"})
    assert not partial.total
    total = Configuration.for_model(model, {"A"}, {"B"})
    assert total.total


def test_configuration_for_model_unknown_feature():
    with pytest.raises(UnknownFeatureError):
        Configuration.for_model(_tiny(), {"A", "Ghost"})


def test_children_follow_declaration_order():
    features = {
        "A": Feature("A", None, Variability.MANDATORY),
        "Z": Feature("Z", "A", Variability.OPTIONAL),
        "B": Feature("B", "A", Variability.OPTIONAL),
    }
    model = _tiny(features=features)
    assert model.children("A") == ("Z", "B")
    assert model.tree_order() == ("A", "Z", "B")


def test_structural_equality_is_sensitive_to_sibling_order():
    a = {
        "A": Feature("A", None, Variability.MANDATORY),
        "B": Feature("B", "A", Variability.OPTIONAL),
        "C": Feature("C", "A", Variability.OPTIONAL),
    }
    b = {name: a[name] for name in ("A", "C", "B")}
    left = _tiny(features=a)
    right = _tiny(features=b)
    assert left == right  # plain dataclass equality ignores dict order
    assert not structurally_equal(left, right)


def test_structural_equality_ignores_subtree_interleaving():
    a = {
        "A": Feature("A", None, Variability.MANDATORY),
        "B": Feature("B", "A", Variability.OPTIONAL),
        "C": Feature("C", "B", Variability.OPTIONAL),
        "D": Feature("D", "A", Variability.OPTIONAL),
    }
    # same tree, D declared before C; pre-order is A,B,C,D either way
    b = {name: a[name] for name in ("A", "B", "D", "C")}
    assert structurally_equal(_tiny(features=a), _tiny(features=b))


def test_structural_equality_ignores_constraint_order():
    c1 = CrossTreeConstraint(ConstraintKind.REQUIRES, "B", "A")
    c2 = CrossTreeConstraint(ConstraintKind.EXCLUDES, "A", "B")
    assert structurally_equal(
        _tiny(constraints=(c1, c2)), _tiny(constraints=(c2, c1)))
