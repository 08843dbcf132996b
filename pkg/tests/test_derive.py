from __future__ import annotations

import random

import pytest

import splforge as sf
from splforge import derive, dsl
from splforge.model import Configuration, Layer

from modelgen import random_model


def _config(model, path):
    return dsl.parse_configuration(path.read_text(), model, filename=str(path))


@pytest.fixture(scope="module")
def full_manifest(webspl, fixtures):
    config = _config(webspl, fixtures / "webspl-full.cfg")
    return derive.derive_product(webspl, config, "webspl-full", 4)


# -- module graph ---------------------------------------------------------------


def test_graph_nodes_are_selected_modules(webspl, fixtures):
    config = _config(webspl, fixtures / "webspl-full.cfg")
    graph = derive.build_module_graph(webspl, config)
    # language features contribute no module of their own
    assert graph.nodes == {
        "web-spl", "data-management", "data-export", "internationalization",
        "user-profile-control", "user-management", "permission-management",
        "profile-management"}


def test_graph_edges_point_at_parents_and_requirements(webspl, fixtures):
    config = _config(webspl, fixtures / "webspl-full.cfg")
    graph = derive.build_module_graph(webspl, config)
    assert ("data-management", "web-spl") in graph.edges
    assert ("user-management", "user-profile-control") in graph.edges
    # requires DataExport DataManagement
    assert ("data-export", "data-management") in graph.edges
    # requires PermissionManagement UserManagement
    assert ("permission-management", "user-management") in graph.edges


def test_graph_rejects_invalid_configuration(webspl):
    bad = Configuration.for_model(
        webspl, {"WebSPL"}, set(webspl.features) - {"WebSPL"})
    with pytest.raises(sf.InvalidConfigurationError) as excinfo:
        derive.build_module_graph(webspl, bad)
    assert excinfo.value.violations


def test_missing_binding_is_reported():
    model = dsl.parse_model(
        'model M\nfeature R => module "r" {\n  mandatory feature Bare\n}\n')
    config = Configuration.for_model(model, {"R", "Bare"}, set())
    with pytest.raises(sf.MissingBindingError, match="Bare"):
        derive.build_module_graph(model, config)


def test_shared_module_produces_no_self_edge():
    text = ('model M\nfeature R => module "core" {\n'
            '  mandatory feature A => module "core"\n}\n')
    model = dsl.parse_model(text)
    config = Configuration.for_model(model, {"R", "A"}, set())
    graph = derive.build_module_graph(model, config)
    assert graph.nodes == {"core"}
    assert graph.edges == frozenset()


# -- derivation -----------------------------------------------------------------


def test_full_product_matches_golden_bytes(full_manifest, fixtures):
    golden = (fixtures / "golden" / "webspl-full.manifest").read_text()
    assert derive.write_manifest(full_manifest) == golden


def test_minimal_product_matches_golden_bytes(webspl, fixtures):
    v1 = sf.filter_by_version(webspl, 1)
    config = _config(v1, fixtures / "webspl-minimal.cfg")
    manifest = derive.derive_product(webspl, config, "webspl-minimal", 1)
    golden = (fixtures / "golden" / "webspl-minimal.manifest").read_text()
    assert derive.write_manifest(manifest) == golden


def test_modules_listed_dependencies_first(full_manifest):
    position = {module: i for i, (module, _) in enumerate(full_manifest.modules)}
    assert position["web-spl"] == 0
    assert position["data-management"] < position["data-export"]
    assert position["user-profile-control"] < position["user-management"]
    assert position["user-management"] < position["permission-management"]


def test_minimal_modules_subset_of_full(webspl, fixtures, full_manifest):
    v1 = sf.filter_by_version(webspl, 1)
    config = _config(v1, fixtures / "webspl-minimal.cfg")
    minimal = derive.derive_product(webspl, config, "webspl-minimal", 1)
    minimal_modules = {module for module, _ in minimal.modules}
    full_modules = {module for module, _ in full_manifest.modules}
    assert minimal_modules <= full_modules
    assert minimal.cycle_count == 0


def test_languages_follow_selection(webspl):
    v1 = sf.filter_by_version(webspl, 1)
    config = Configuration.for_model(v1, set(v1.features) - {"EnUS"}, {"EnUS"})
    manifest = derive.derive_product(webspl, config, "pt-only", 1)
    assert manifest.languages == ("pt_BR",)


def test_cyclic_module_graph_counted_and_sorted(fixtures):
    model = dsl.parse_model((fixtures / "tangle.fm").read_text())
    config = _config(model, fixtures / "tangle.cfg")
    manifest = derive.derive_product(model, config, "tangle", 1)
    assert manifest.cycle_count == 1
    assert [module for module, _ in manifest.modules] == ["hub", "left", "right"]
    assert "cycles: 1" in derive.write_manifest(manifest)


def test_layer_union_across_features_of_one_module():
    text = ('model M\nfeature R => module "core" layer XHTML {\n'
            '  mandatory feature A => module "core" layer DAO\n'
            '  optional feature B => module "side" layer Controller\n}\n')
    model = dsl.parse_model(text)
    config = Configuration.for_model(model, {"R", "A", "B"}, set())
    manifest = derive.derive_product(model, config, "p", 1)
    by_name = dict(manifest.modules)
    assert by_name["core"] == (Layer.XHTML, Layer.DAO)
    assert by_name["side"] == (Layer.CONTROLLER,)


def test_topological_property_on_random_models():
    rng = random.Random(1010)
    derived = 0
    while derived < 60:
        model = random_model(rng, with_assets=True)
        products = sf.enumerate_products(model)
        if not products:
            continue
        config = products[rng.randrange(len(products))]
        try:
            manifest = derive.derive_product(model, config, "p", model.max_version)
        except sf.MissingBindingError:
            continue
        derived += 1
        if manifest.cycle_count:
            continue
        graph, _ = derive._graph_with_layers(model, config)
        position = {module: i for i, (module, _) in enumerate(manifest.modules)}
        for source, target in graph.edges:
            assert position[target] < position[source]
    assert derived == 60


# -- manifest text --------------------------------------------------------------


def test_manifest_round_trips(full_manifest):
    text = derive.write_manifest(full_manifest)
    assert derive.read_manifest(text) == full_manifest
    assert derive.write_manifest(derive.read_manifest(text)) == text


def test_manifest_without_languages_round_trips(fixtures):
    model = dsl.parse_model((fixtures / "tangle.fm").read_text())
    config = _config(model, fixtures / "tangle.cfg")
    manifest = derive.derive_product(model, config, "tangle", 1)
    assert derive.read_manifest(derive.write_manifest(manifest)) == manifest


@pytest.mark.parametrize("mutation", [
    lambda text: text.replace("manifest ", "Manifest "),
    lambda text: text.replace("model WebSPL v4", "model WebSPL"),
    lambda text: text.replace("layers=X,C,S,D", "layers=C,X,S,D", 1),
    lambda text: text.replace("layers=X,C,S,D", "layers=X,Q", 1),
    lambda text: text.replace("cycles: 0", "cycles: none"),
    lambda text: text + "trailing junk\n",
    lambda text: text.replace("features: ", "features "),
])
def test_malformed_manifest_rejected(full_manifest, mutation):
    text = mutation(derive.write_manifest(full_manifest))
    with pytest.raises(sf.ManifestSyntaxError):
        derive.read_manifest(text)
