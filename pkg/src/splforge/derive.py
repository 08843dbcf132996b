"""Product derivation: configuration + version -> module manifest.

A valid configuration picks features; features map to implementation
modules through their bindings. The module graph gets an edge from each
selected feature's module to its selected parent's module, plus an edge
per satisfied requires constraint. The manifest lists modules with
dependencies first (Kahn order, name tiebreak) so a build can consume
them in sequence.

Language features are the one exception to "every selected feature
needs a binding": they are realized as resource bundles inside the
internationalization module and surface on the manifest's languages
line instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import graphs
from .analysis import filter_by_version, validate
from .errors import InvalidConfigurationError, ManifestSyntaxError, MissingBindingError
from .model import Configuration, ConstraintKind, FeatureModel, Layer, canonical_layers, layer_from_code

# Locale realized by each known language feature.
LANGUAGE_FEATURES = {
    "PtBR": "pt_BR",
    "EnUS": "en_US",
}

MANIFEST_FORMAT = "splforge-manifest-1"


@dataclass(frozen=True)
class ModuleGraph:
    """Modules of one product and the dependency edges between them.

    An edge (a, b) means module a depends on module b. Self-edges are
    never produced: a feature whose parent shares its module adds no
    edge.
    """

    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]


@dataclass(frozen=True)
class ProductManifest:
    product_name: str
    model_name: str
    version: int
    features: tuple[str, ...]
    modules: tuple[tuple[str, tuple[Layer, ...]], ...]
    languages: tuple[str, ...]
    cycle_count: int


def _graph_with_layers(
    model: FeatureModel, config: Configuration
) -> tuple[ModuleGraph, dict[str, tuple[Layer, ...]]]:
    modules: dict[str, set[Layer]] = {}
    module_of: dict[str, str] = {}
    for name in model.features:
        if name not in config.selected:
            continue
        feature = model.features[name]
        if feature.asset is None:
            if name in LANGUAGE_FEATURES:
                continue
            raise MissingBindingError(name)
        module_of[name] = feature.asset.module_id
        modules.setdefault(feature.asset.module_id, set()).update(feature.asset.layers)

    edges: set[tuple[str, str]] = set()
    for name, module in module_of.items():
        parent = model.features[name].parent
        if parent is None or parent not in config.selected:
            continue
        parent_module = module_of.get(parent)
        if parent_module is not None and parent_module != module:
            edges.add((module, parent_module))
    for constraint in model.constraints:
        if constraint.kind is not ConstraintKind.REQUIRES:
            continue
        if constraint.source not in config.selected or constraint.target not in config.selected:
            continue
        source_module = module_of.get(constraint.source)
        target_module = module_of.get(constraint.target)
        if source_module and target_module and source_module != target_module:
            edges.add((source_module, target_module))

    layers = {module: canonical_layers(found) for module, found in modules.items()}
    return ModuleGraph(frozenset(modules), frozenset(edges)), layers


def build_module_graph(model: FeatureModel, config: Configuration) -> ModuleGraph:
    """Module dependency graph of a validated total configuration.

    Raises InvalidConfigurationError when the configuration does not
    validate, MissingBindingError when a selected non-language feature
    has no module binding.
    """
    result = validate(model, config)
    if not result.valid:
        raise InvalidConfigurationError(
            "configuration is not valid", violations=result.violations
        )
    graph, _ = _graph_with_layers(model, config)
    return graph


def detect_cycles(graph: ModuleGraph) -> list[list[str]]:
    """Dependency cycles, as sorted module groups (see graphs.cycles)."""
    return graphs.cycles(graph.nodes, graph.edges)


def derive_product(
    model: FeatureModel,
    config: Configuration,
    product_name: str,
    version: int,
) -> ProductManifest:
    """Build the manifest for one product of the given release version.

    The model is filtered to the release first; the configuration must
    be total and valid for the filtered model. Modules are listed in
    topological order, dependencies first; when the module graph is
    cyclic the order falls back to sorted names and the manifest's
    cycle count says how many cycles there are (callers treat that as a
    failed derivation, but the manifest still tells them where to look).
    """
    released = filter_by_version(model, version)
    result = validate(released, config)
    if not result.valid:
        raise InvalidConfigurationError(
            "configuration is not valid", violations=result.violations
        )
    graph, layers = _graph_with_layers(released, config)
    cycle_groups = detect_cycles(graph)
    if cycle_groups:
        ordered = sorted(graph.nodes)
    else:
        ordered = graphs.topological_order(graph.nodes, graph.edges)
    languages = sorted(
        locale for name, locale in LANGUAGE_FEATURES.items() if name in config.selected
    )
    return ProductManifest(
        product_name=product_name,
        model_name=released.name,
        version=version,
        features=tuple(sorted(config.selected)),
        modules=tuple((module, layers[module]) for module in ordered),
        languages=tuple(languages),
        cycle_count=len(cycle_groups),
    )


def write_manifest(manifest: ProductManifest) -> str:
    """Render the fixed text form (LF line endings, trailing newline)."""
    lines = [
        f"manifest {manifest.product_name}",
        f"model {manifest.model_name} v{manifest.version}",
        "features: " + ",".join(manifest.features),
    ]
    for module, layers in manifest.modules:
        codes = ",".join(layer.code for layer in layers)
        lines.append(f"module {module} layers={codes}")
    if manifest.languages:
        lines.append("languages: " + ",".join(manifest.languages))
    lines.append(f"cycles: {manifest.cycle_count}")
    return "\n".join(lines) + "\n"


def read_manifest(text: str) -> ProductManifest:
    """Parse manifest text; strict, so write . read is the identity."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    cursor = 0

    def take(prefix: str) -> str:
        nonlocal cursor
        if cursor >= len(lines):
            raise ManifestSyntaxError(f"line {cursor + 1}: expected {prefix!r}, got end of input")
        line = lines[cursor]
        if not line.startswith(prefix):
            raise ManifestSyntaxError(f"line {cursor + 1}: expected {prefix!r}, got {line!r}")
        cursor += 1
        return line[len(prefix):]

    product_name = take("manifest ")
    model_part = take("model ")
    model_name, _, version_part = model_part.rpartition(" v")
    if not model_name or not version_part.isdigit():
        raise ManifestSyntaxError(f"line 2: malformed model line: {model_part!r}")
    features_part = take("features: ")
    features = tuple(features_part.split(",")) if features_part else ()

    modules: list[tuple[str, tuple[Layer, ...]]] = []
    while cursor < len(lines) and lines[cursor].startswith("module "):
        body = lines[cursor][len("module "):]
        cursor += 1
        name, separator, codes = body.partition(" layers=")
        if not separator or not name:
            raise ManifestSyntaxError(f"line {cursor}: malformed module line: {body!r}")
        try:
            layers = tuple(layer_from_code(code) for code in codes.split(","))
        except ValueError as exc:
            raise ManifestSyntaxError(f"line {cursor}: {exc}") from None
        if layers != canonical_layers(layers):
            raise ManifestSyntaxError(f"line {cursor}: layers out of canonical order")
        modules.append((name, layers))

    languages: tuple[str, ...] = ()
    if cursor < len(lines) and lines[cursor].startswith("languages: "):
        languages = tuple(lines[cursor][len("languages: "):].split(","))
        cursor += 1
    cycles_part = take("cycles: ")
    if not cycles_part.isdigit():
        raise ManifestSyntaxError(f"malformed cycle count: {cycles_part!r}")
    if cursor != len(lines):
        raise ManifestSyntaxError(f"line {cursor + 1}: unexpected content: {lines[cursor]!r}")
    return ProductManifest(
        product_name=product_name,
        model_name=model_name,
        version=int(version_part),
        features=features,
        modules=tuple(modules),
        languages=languages,
        cycle_count=int(cycles_part),
    )
