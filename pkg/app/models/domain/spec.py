from typing import List

from pydantic import Field

from app.models.domain.base import DomainModel, TypeSelector
from app.models.domain.cost import CostModel
from app.models.domain.risk import NoRisk, RiskModel
from app.models.domain.utility import LinearInTypeUtility, UtilityModel


class TypePair(DomainModel):
    """Consumer valuations of privacy and the prior on the high type."""

    theta_low: float
    theta_high: float
    prior_high: float

    def theta(self, which: TypeSelector) -> float:
        return self.theta_high if which is TypeSelector.HIGH else self.theta_low


class PrivacyInterval(DomainModel):
    """Admissible privacy settings [x_min, x_max]."""

    x_min: float
    x_max: float

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    def contains(self, x: float) -> bool:
        return self.x_min <= x <= self.x_max

    def grid(self, points: int) -> List[float]:
        """Evenly spaced points including both ends."""
        if points < 2:
            return [self.x_min]
        step = self.width / (points - 1)
        values = [self.x_min + i * step for i in range(points - 1)]
        values.append(self.x_max)
        return values


class ModelSpec(DomainModel):
    """A complete problem instance.

    Construction only checks structure; the assumptions the solvers rely on
    are checked by ``ModelService.validate``.
    """

    types: TypePair
    interval: PrivacyInterval
    utility: UtilityModel = Field(default_factory=LinearInTypeUtility)
    cost: CostModel
    risk: RiskModel = Field(default_factory=NoRisk)

    @property
    def prior_high(self) -> float:
        return self.types.prior_high

    @property
    def risk_active(self) -> bool:
        return self.risk.active

    @property
    def differentiable(self) -> bool:
        return (
            self.utility.differentiable
            and self.cost.differentiable
            and self.risk.differentiable
        )

    def with_prior(self, prior_high: float) -> "ModelSpec":
        types = self.types.model_copy(update={"prior_high": prior_high})
        return self.model_copy(update={"types": types})

    def without_risk(self) -> "ModelSpec":
        return self.model_copy(update={"risk": NoRisk()})
