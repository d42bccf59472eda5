from typing import Annotated, Callable, Literal, Optional, Union

from pydantic import Field

from app.core.exceptions import UnsupportedOperationError
from app.models.domain.base import DomainModel


class QuadraticCost(DomainModel):
    """Operator cost of privacy g(x) = ½ζx²."""

    kind: Literal["quadratic"] = "quadratic"
    zeta: float

    @property
    def differentiable(self) -> bool:
        return True

    def value(self, x: float) -> float:
        return 0.5 * self.zeta * x * x

    def slope(self, x: float) -> float:
        return self.zeta * x


class CustomCost(DomainModel):
    """User supplied g(x) with an optional derivative."""

    kind: Literal["custom"] = "custom"
    evaluator: Callable[[float], float]
    derivative: Optional[Callable[[float], float]] = None

    @property
    def differentiable(self) -> bool:
        return self.derivative is not None

    def value(self, x: float) -> float:
        return float(self.evaluator(x))

    def slope(self, x: float) -> float:
        if self.derivative is None:
            raise UnsupportedOperationError("custom cost has no derivative")
        return float(self.derivative(x))


CostModel = Annotated[Union[QuadraticCost, CustomCost], Field(discriminator="kind")]
