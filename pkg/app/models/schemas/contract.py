from enum import Enum
from typing import List, Optional

from app.models.schemas.base import BaseSchema
from app.models.schemas.optimization import BoundaryFlag


class Regime(str, Enum):
    FIRST_BEST = "first_best"
    SECOND_BEST = "second_best"


class ReductionKind(str, Enum):
    """Which binding constraints pinned the second-best prices.

    ``IR_LOW_IC_HIGH`` is the textbook reduction. ``PARTICIPATION_GUARDED``
    is used when that menu would push the high type below its outside option
    (possible under breach risk) and the high type's participation binds.
    """

    IR_LOW_IC_HIGH = "ir_low_ic_high"
    PARTICIPATION_GUARDED = "participation_guarded"


class Contract(BaseSchema):
    """A privacy setting and its price."""

    x: float
    t: float


class ContractMenu(BaseSchema):
    """The pair of offers, indexed by the type meant to pick them."""

    low: Contract
    high: Contract
    regime: Regime
    risk_active: bool


class ConstraintResiduals(BaseSchema):
    """LHS − RHS of the four original constraints; nonnegative when met."""

    ic_high: float
    ic_low: float
    ir_low: float
    ir_high: float

    def feasible(self, feas_tol: float) -> bool:
        return min(self.ic_high, self.ic_low, self.ir_low, self.ir_high) >= -feas_tol

    def binding(self, feas_tol: float) -> List[str]:
        """Names of the constraints that hold with equality."""
        return [
            name
            for name in ("ir_low", "ic_high", "ic_low", "ir_high")
            if abs(getattr(self, name)) <= feas_tol
        ]


class SolveReport(BaseSchema):
    """A solved (or evaluated) menu with its diagnostics."""

    menu: ContractMenu
    residuals: ConstraintResiduals
    prior_high: float
    information_rent: float
    profit: float
    welfare: float
    boundary_low: BoundaryFlag
    boundary_high: BoundaryFlag
    binding: List[str]
    feasible: bool
    reduction: Optional[ReductionKind] = None
