from pydantic import Field, model_validator

from app.models.schemas.base import BaseSchema
from app.models.schemas.contract import ContractMenu


class DlcParams(BaseSchema):
    """Direct-load-control example: xθ utility, ½ζx² cost, m(1−x) breach."""

    theta_low: float = Field(gt=0)
    theta_high: float = Field(gt=0)
    zeta: float = Field(gt=0)
    m: float = Field(default=0.0, ge=0, le=1)
    loss_low: float = Field(default=0.0, ge=0)
    loss_high: float = Field(default=0.0, ge=0)
    prior_high: float = Field(ge=0, le=1)

    @model_validator(mode="after")
    def check_type_order(self) -> "DlcParams":
        if not self.theta_low < self.theta_high:
            raise ValueError(
                f"theta_low={self.theta_low} must be below theta_high={self.theta_high}"
            )
        return self


class ClosedFormSolution(BaseSchema):
    """A closed-form menu and how far the formulas can be trusted for it.

    ``upper_clamped`` means a formula gave an allocation above 1, where the
    closed form no longer solves the interval-constrained problem.
    ``implementable`` is False when the high type would refuse its contract.
    """

    menu: ContractMenu
    lower_clamped: bool
    upper_clamped: bool
    implementable: bool
