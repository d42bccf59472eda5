from typing import Annotated, Callable, Literal, Optional, Union

from pydantic import Field

from app.core.exceptions import UnsupportedOperationError
from app.models.domain.base import DomainModel


class LinearInTypeUtility(DomainModel):
    """Base consumer utility Û(x, θ) = xθ."""

    kind: Literal["linear_in_type"] = "linear_in_type"

    @property
    def differentiable(self) -> bool:
        return True

    def value(self, x: float, theta: float) -> float:
        return x * theta

    def slope(self, x: float, theta: float) -> float:
        return theta


class CustomUtility(DomainModel):
    """User supplied Û(x, θ) with an optional derivative in x."""

    kind: Literal["custom"] = "custom"
    evaluator: Callable[[float, float], float]
    derivative: Optional[Callable[[float, float], float]] = None

    @property
    def differentiable(self) -> bool:
        return self.derivative is not None

    def value(self, x: float, theta: float) -> float:
        return float(self.evaluator(x, theta))

    def slope(self, x: float, theta: float) -> float:
        if self.derivative is None:
            raise UnsupportedOperationError("custom utility has no derivative")
        return float(self.derivative(x, theta))


UtilityModel = Annotated[
    Union[LinearInTypeUtility, CustomUtility], Field(discriminator="kind")
]
