"""Exception types shared across the package."""

from __future__ import annotations


class SplforgeError(Exception):
    """Base class for every error raised by this package."""


class ModelError(SplforgeError):
    """A feature model violates a structural invariant."""


class UnknownFeatureError(SplforgeError):
    """A feature name does not exist in the model at hand."""

    def __init__(self, name: str) -> None:
        super().__init__(f"unknown feature: {name}")
        self.name = name


class ExactBoundExceededError(SplforgeError):
    """An exact analysis was requested on a model above the feature bound."""

    def __init__(self, feature_count: int, bound: int) -> None:
        super().__init__(
            f"exact analysis supports at most {bound} features, model has {feature_count}"
        )
        self.feature_count = feature_count
        self.bound = bound


class RootRemovedError(SplforgeError):
    """Version filtering would remove the root feature."""


class MissingBindingError(SplforgeError):
    """A selected feature has no module binding and no other realization."""

    def __init__(self, name: str) -> None:
        super().__init__(f"selected feature has no module binding: {name}")
        self.name = name


class InvalidConfigurationError(SplforgeError):
    """A configuration fails validation where a valid one is required.

    ``violations`` holds the Violation list when validation produced one;
    it is empty for structural problems such as a partial configuration
    passed where a total one is needed.
    """

    def __init__(self, message: str, violations: tuple = ()) -> None:
        super().__init__(message)
        self.violations = violations


class ManifestSyntaxError(SplforgeError):
    """A .manifest document does not follow the manifest format."""


class ReportSyntaxError(SplforgeError):
    """A .metrics document does not follow the report format."""


class NonUtf8InputError(SplforgeError):
    """A source file to be measured is not valid UTF-8."""

    def __init__(self, path: str) -> None:
        super().__init__(f"not valid UTF-8: {path}")
        self.path = path


class ParseFailure(SplforgeError):
    """Parsing a model or configuration produced diagnostics.

    ``diagnostics`` is a list of dsl.Diagnostic, never empty.
    """

    def __init__(self, diagnostics) -> None:
        lines = "\n".join(str(d) for d in diagnostics)
        super().__init__(f"parse failed:\n{lines}")
        self.diagnostics = list(diagnostics)
