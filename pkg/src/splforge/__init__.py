"""Feature-model toolchain.

Parse feature models and configurations, run exact analyses
(validation, propagation, counting, enumeration, diagnostics), derive
product manifests over a module dependency graph, and measure source
corpora (size, complexity, duplication, package cycles, technical
debt). A CLI (``splforge``) and a small HTTP service expose the same
operations.
"""

from .analysis import (
    EXACT_FEATURE_BOUND,
    Clause,
    count_products,
    diagnose,
    encode,
    enumerate_products,
    filter_by_version,
    propagate,
    validate,
)
from .derive import (
    ModuleGraph,
    ProductManifest,
    build_module_graph,
    derive_product,
    detect_cycles,
    read_manifest,
    write_manifest,
)
from .dsl import (
    Diagnostic,
    parse_configuration,
    parse_model,
    reference_model,
    reference_model_path,
    serialize_configuration,
    serialize_model,
)
from .errors import (
    ExactBoundExceededError,
    InvalidConfigurationError,
    ManifestSyntaxError,
    MissingBindingError,
    ModelError,
    NonUtf8InputError,
    ParseFailure,
    ReportSyntaxError,
    RootRemovedError,
    SplforgeError,
    UnknownFeatureError,
)
from .model import (
    AssetBinding,
    Configuration,
    ConstraintKind,
    CrossTreeConstraint,
    Feature,
    FeatureModel,
    Group,
    GroupKind,
    Layer,
    ModelDiagnostics,
    PropagationResult,
    ValidationResult,
    Variability,
    Violation,
    structurally_equal,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
