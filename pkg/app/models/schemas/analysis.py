from enum import Enum
from typing import List, Optional

from app.models.schemas.base import BaseSchema
from app.models.schemas.contract import SolveReport
from app.models.schemas.oracle import Certification


class Thresholds(BaseSchema):
    """Critical priors: loss ratio p̄ and the points where x_L* reaches x_min.

    Both p* values belong to the reduced low allocation, the argmax of
    U(x, θ_L) − p·U(x, θ_H) − (1 − p)·g(x). Once the high type's participation
    binds, the reported second-best x_L is re-solved and can stay above x_min
    past p_star_risk.
    """

    p_bar: Optional[float] = None
    p_star_norisk: float
    p_star_risk: float


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    TIE_AT_BOUNDARY = "tie_at_boundary"
    SKIPPED = "skipped"


class OrderingCheck(BaseSchema):
    """One tested inequality ``lhs <op> rhs`` with its measured slack."""

    proposition: str
    inequality: str
    lhs: float
    rhs: float
    slack: float
    verdict: Verdict
    reason: Optional[str] = None


class ComparisonReport(BaseSchema):
    no_risk: SolveReport
    with_risk: SolveReport
    thresholds: Thresholds
    orderings: List[OrderingCheck]
    certification: Optional[List[Certification]] = None

    def failures(self) -> List[OrderingCheck]:
        return [o for o in self.orderings if o.verdict is Verdict.FAIL]


class ProfitTerms(BaseSchema):
    """The two profit components at one prior, for one risk mode."""

    p: float
    risk_active: bool
    high_term: float
    low_term: float

    @property
    def total(self) -> float:
        return self.high_term + self.low_term


class SweepEntry(BaseSchema):
    p: float
    # risk mode of the row; a spec without risk still yields "on" rows
    risk_on: bool
    report: SolveReport


class SweepRow(BaseSchema):
    """One CSV line of a sweep."""

    p: float
    regime: str
    risk: str
    x_L: float
    x_H: float
    t_L: float
    t_H: float
    rent: float
    profit: float
    welfare: float
    boundary_L: str
    boundary_H: str


class SweepTable(BaseSchema):
    """Reports over a p-grid in (p, regime, risk) order."""

    entries: List[SweepEntry]

    def rows(self) -> List[SweepRow]:
        rows = []
        for entry in self.entries:
            report = entry.report
            menu = report.menu
            rows.append(
                SweepRow(
                    p=entry.p,
                    regime=menu.regime.value,
                    risk="on" if entry.risk_on else "off",
                    x_L=menu.low.x,
                    x_H=menu.high.x,
                    t_L=menu.low.t,
                    t_H=menu.high.t,
                    rent=report.information_rent,
                    profit=report.profit,
                    welfare=report.welfare,
                    boundary_L=report.boundary_low.value,
                    boundary_H=report.boundary_high.value,
                )
            )
        return rows

    def select(self, regime: str, risk: str) -> List[SweepRow]:
        return [r for r in self.rows() if r.regime == regime and r.risk == risk]
