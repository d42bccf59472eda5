from typing import TYPE_CHECKING, List, Optional

if TYPE_CHECKING:
    from app.models.schemas.validation import ValidationReport


class PrivacyContractsError(Exception):
    """Base class for every error raised by the solver package."""


class ArgumentError(PrivacyContractsError, ValueError):
    """An argument is outside the range an operation accepts."""


class DomainError(PrivacyContractsError, ValueError):
    """A privacy setting lies outside the privacy interval."""

    def __init__(self, x: float, x_min: float, x_max: float):
        self.x = x
        self.x_min = x_min
        self.x_max = x_max
        super().__init__(f"x={x!r} is outside the privacy interval [{x_min}, {x_max}]")


class NumericError(PrivacyContractsError):
    """An evaluator returned NaN."""

    def __init__(self, x: float, what: str = "objective"):
        self.x = x
        self.what = what
        super().__init__(f"{what} evaluated to NaN at x={x!r}")


class UnsupportedOperationError(PrivacyContractsError):
    """The model cannot provide what was asked of it (e.g. a derivative)."""


class SpecValidationError(PrivacyContractsError):
    """A model spec failed validation."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        lines = [f"{v.assumption}: {v.message}" for v in report.violations]
        super().__init__("invalid model spec: " + "; ".join(lines))


class InfeasibleMenuError(PrivacyContractsError):
    """A solver produced a menu violating one of the original constraints."""


class ConfigError(PrivacyContractsError):
    """A run config could not be read or does not match the schema."""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        self.diagnostics = diagnostics or []
        super().__init__(message)

    def __str__(self) -> str:
        if not self.diagnostics:
            return self.args[0]
        return "\n".join([self.args[0], *(f"  {d}" for d in self.diagnostics)])
