from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from app.models.schemas.analysis import SweepRow
from app.models.schemas.base import BaseAPIResponse, BaseSchema
from app.models.schemas.contract import (
    ConstraintResiduals,
    Contract,
    ContractMenu,
    Regime,
    SolveReport,
)
from app.models.schemas.run_config import ModelConfig


class ModelRequest(BaseModel):
    """Request body carrying a problem instance."""

    spec: ModelConfig


class MenuIn(BaseModel):
    x_low: float
    t_low: float
    x_high: float
    t_high: float

    def to_menu(self, risk_active: bool) -> ContractMenu:
        return ContractMenu(
            low=Contract(x=self.x_low, t=self.t_low),
            high=Contract(x=self.x_high, t=self.t_high),
            regime=Regime.SECOND_BEST,
            risk_active=risk_active,
        )


class VerifyRequest(ModelRequest):
    menu: MenuIn


class CompareRequest(ModelRequest):
    oracle: bool = False
    oracle_steps: Optional[int] = Field(default=None, ge=2, le=4001)


class SweepRequest(ModelRequest):
    grid: str = Field(..., description="p_min,p_max,n")
    format: Literal["json", "csv"] = "json"


class RiskModeReports(BaseSchema):
    """First- and second-best reports for one risk mode."""

    risk: Literal["off", "on"]
    first_best: SolveReport
    second_best: Optional[SolveReport] = None


class SolveResponse(BaseAPIResponse):
    reports: List[RiskModeReports]


class VerifyResponse(BaseAPIResponse):
    residuals: ConstraintResiduals
    feasible: bool
    binding: List[str]


class SweepResponse(BaseAPIResponse):
    rows: List[SweepRow]
