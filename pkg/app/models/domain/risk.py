from typing import Annotated, Callable, Literal, Optional, Union

from pydantic import Field

from app.core.exceptions import UnsupportedOperationError
from app.models.domain.base import DomainModel, TypeSelector


class NoRisk(DomainModel):
    """No breach losses: η ≡ 1 and ℓ ≡ 0."""

    kind: Literal["none"] = "none"

    @property
    def active(self) -> bool:
        return False

    @property
    def differentiable(self) -> bool:
        return True

    def loss(self, theta: TypeSelector) -> float:
        return 0.0

    def breach_probability(self, x: float) -> float:
        return 0.0

    def eta_slope(self, x: float) -> float:
        return 0.0


class LinearBreachRisk(DomainModel):
    """Breach probability 1 − η(x) = m(1 − x) with type dependent losses."""

    kind: Literal["linear_breach"] = "linear_breach"
    m: float
    loss_low: float
    loss_high: float

    @property
    def active(self) -> bool:
        return self.m != 0 and (self.loss_low != 0 or self.loss_high != 0)

    @property
    def differentiable(self) -> bool:
        return True

    def loss(self, theta: TypeSelector) -> float:
        return self.loss_high if theta is TypeSelector.HIGH else self.loss_low

    def breach_probability(self, x: float) -> float:
        return self.m * (1.0 - x)

    def eta_slope(self, x: float) -> float:
        return self.m


class CustomRisk(DomainModel):
    """User supplied η(x) (probability of avoiding a breach)."""

    kind: Literal["custom"] = "custom"
    eta: Callable[[float], float]
    eta_derivative: Optional[Callable[[float], float]] = None
    loss_low: float
    loss_high: float

    @property
    def active(self) -> bool:
        return self.loss_low != 0 or self.loss_high != 0

    @property
    def differentiable(self) -> bool:
        return self.eta_derivative is not None

    def loss(self, theta: TypeSelector) -> float:
        return self.loss_high if theta is TypeSelector.HIGH else self.loss_low

    def breach_probability(self, x: float) -> float:
        return 1.0 - float(self.eta(x))

    def eta_slope(self, x: float) -> float:
        if self.eta_derivative is None:
            raise UnsupportedOperationError("custom risk has no derivative of eta")
        return float(self.eta_derivative(x))


RiskModel = Annotated[
    Union[NoRisk, LinearBreachRisk, CustomRisk], Field(discriminator="kind")
]
