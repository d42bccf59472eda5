from typing import List

from app.models.schemas.base import BaseSchema
from app.models.schemas.contract import ConstraintResiduals, ContractMenu


class InnerOptimum(BaseSchema):
    """Best prices for fixed allocations."""

    t_low: float
    t_high: float
    profit: float


class OracleResult(BaseSchema):
    """Brute-force optimum of the full four-constraint problem."""

    menu: ContractMenu
    profit: float
    x_grid_step: float
    certified_gap_bound: float
    residuals: ConstraintResiduals
    binding: List[str]


class Certification(BaseSchema):
    """Screening solver checked against the brute-force oracle."""

    risk_active: bool
    solver_profit: float
    oracle_profit: float
    gap: float
    certified_gap_bound: float
    within_bound: bool
    oracle_binding: List[str]
