"""Comparative statics between the no-risk and with-risk optimal menus."""

from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

import logfire

from app.core.exceptions import ArgumentError
from app.models.domain import ModelSpec, NoRisk, TypeSelector
from app.models.schemas.analysis import (
    ComparisonReport,
    OrderingCheck,
    ProfitTerms,
    SweepEntry,
    SweepTable,
    Thresholds,
    Verdict,
)
from app.models.schemas.contract import ReductionKind, SolveReport
from app.models.schemas.optimization import BoundaryFlag
from app.models.schemas.run_config import SolverTolerances
from app.services.model_service import ModelService
from app.services.oracle_service import OracleService
from app.services.screening_service import ScreeningService

# Step to the second prior of the monotonicity check
PRIOR_STEP = 1e-3

GUARDED_REASON = (
    "high-type participation binds; the first-order argument does not apply"
)


def _sweep_point(
    spec: ModelSpec, p: float, tolerances: SolverTolerances
) -> List[SweepEntry]:
    """All four reports at one prior, in (regime, risk) order."""
    screening = ScreeningService(tolerances)
    with_risk = spec.with_prior(p)
    plain = with_risk.without_risk()
    entries = []
    for solve in (screening.solve_first_best, screening.solve_second_best):
        entries.append(SweepEntry(p=p, risk_on=False, report=solve(plain)))
        entries.append(SweepEntry(p=p, risk_on=True, report=solve(with_risk)))
    return entries


def _guarded(*reports: SolveReport) -> bool:
    return any(r.reduction is ReductionKind.PARTICIPATION_GUARDED for r in reports)


def _at_lower(*reports: SolveReport) -> bool:
    return all(r.boundary_low is BoundaryFlag.LOWER for r in reports)


class RiskAnalysisService:
    """Thresholds, orderings and sweeps over the high-type prior."""

    def __init__(self, tolerances: Optional[SolverTolerances] = None):
        self.tolerances = tolerances or SolverTolerances()
        self.models = ModelService(self.tolerances)
        self.screening = ScreeningService(self.tolerances)
        self.oracle = OracleService(self.tolerances)

    # Thresholds

    def _critical_prior(self, spec: ModelSpec) -> float:
        """Smallest p at which the reduced low allocation sits at x_min."""
        eps = self.tolerances.threshold_tol

        def at_lower(p: float) -> bool:
            result = self.screening.reduced_low_allocation(spec, p)
            return result.at_boundary is BoundaryFlag.LOWER

        if at_lower(eps):
            return 0.0
        if not at_lower(1.0 - eps):
            return 1.0
        lo, hi = eps, 1.0 - eps
        for _ in range(self.tolerances.threshold_max_iter):
            if hi - lo <= eps:
                break
            mid = 0.5 * (lo + hi)
            if at_lower(mid):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    def thresholds(self, spec: ModelSpec) -> Thresholds:
        """p̄ from the losses and the critical priors by bisection on p."""
        self.models.ensure_valid(spec)
        loss_low = spec.risk.loss(TypeSelector.LOW)
        loss_high = spec.risk.loss(TypeSelector.HIGH)
        p_star_norisk = self._critical_prior(spec.without_risk())
        p_star_risk = (
            self._critical_prior(spec) if spec.risk_active else p_star_norisk
        )
        result = Thresholds(
            p_bar=loss_low / loss_high if loss_high > 0 else None,
            p_star_norisk=p_star_norisk,
            p_star_risk=p_star_risk,
        )
        logfire.debug("Computed thresholds", **result.model_dump())
        return result

    # Orderings

    def _check(
        self,
        proposition: str,
        inequality: str,
        lhs: float,
        rhs: float,
        relation: str,
        tolerance: float,
        tie: bool = False,
        skip: Optional[str] = None,
    ) -> OrderingCheck:
        if relation in (">=", ">"):
            slack = lhs - rhs
        elif relation in ("<=", "<"):
            slack = rhs - lhs
        else:
            slack = -abs(lhs - rhs)

        if skip is not None:
            verdict = Verdict.SKIPPED
        elif tie and abs(lhs - rhs) <= tolerance:
            verdict = Verdict.TIE_AT_BOUNDARY
        elif slack >= -tolerance:
            verdict = Verdict.PASS
        else:
            verdict = Verdict.FAIL
        return OrderingCheck(
            proposition=proposition,
            inequality=inequality,
            lhs=lhs,
            rhs=rhs,
            slack=slack,
            verdict=verdict,
            reason=skip,
        )

    def _orderings(
        self,
        spec: ModelSpec,
        no_risk: SolveReport,
        with_risk: SolveReport,
        p_bar: Optional[float],
    ) -> List[OrderingCheck]:
        p = spec.prior_high
        x_tol = 2 * self.tolerances.tol
        v_tol = self.tolerances.feas_tol
        guarded = GUARDED_REASON if _guarded(no_risk, with_risk) else None
        no_p_bar = (
            "p_bar is undefined without a high-type loss" if p_bar is None else None
        )
        both_lower = _at_lower(no_risk, with_risk)

        hat, star = no_risk.menu, with_risk.menu
        # x_H is the first-best allocation under either reduction
        checks = [
            self._check(
                "1",
                "x_H* >= x_hat_H*",
                star.high.x,
                hat.high.x,
                ">=",
                x_tol,
                tie=(
                    no_risk.boundary_high is with_risk.boundary_high
                    and with_risk.boundary_high is not BoundaryFlag.INTERIOR
                ),
            )
        ]

        # Prop 2: direction of the low allocation set by the side of p_bar
        regime = None
        if p_bar is not None:
            if abs(p - p_bar) <= self.tolerances.threshold_tol:
                regime = "=="
            else:
                regime = "<" if p < p_bar else ">"
        relation = {"<": ">=", ">": "<=", "==": "=="}.get(regime or "", ">=")
        checks.append(
            self._check(
                "2",
                f"x_L* {relation} x_hat_L*",
                star.low.x,
                hat.low.x,
                relation,
                x_tol,
                tie=both_lower,
                skip=no_p_bar or guarded,
            )
        )

        checks += self._monotonicity_checks(spec, no_risk, with_risk, x_tol)
        checks += self._price_checks(spec, no_risk, with_risk, p_bar, regime, v_tol)

        # Prop 5: rents once the risk-dominant regime starts
        interior = (
            no_risk.boundary_low is BoundaryFlag.INTERIOR
            and with_risk.boundary_low is BoundaryFlag.INTERIOR
        )
        checks.append(
            self._check(
                "5",
                "rent(no risk) > rent(risk)",
                no_risk.information_rent,
                with_risk.information_rent,
                ">",
                v_tol,
                skip=no_p_bar
                or guarded
                or (None if regime == ">" else "stated for p > p_bar")
                or (None if interior else "a low allocation is on the boundary"),
            )
        )
        return checks

    def _monotonicity_checks(
        self,
        spec: ModelSpec,
        no_risk: SolveReport,
        with_risk: SolveReport,
        x_tol: float,
    ) -> List[OrderingCheck]:
        p = spec.prior_high
        p_next = p + PRIOR_STEP if p + PRIOR_STEP < 1.0 else 0.5 * (p + 1.0)
        checks = []
        for label, base, current in (
            ("no risk", spec.without_risk(), no_risk),
            ("risk", spec, with_risk),
        ):
            later = self.screening.solve_second_best(base.with_prior(p_next))
            checks.append(
                self._check(
                    "3",
                    f"x_L*({p:g}) >= x_L*({p_next:g}) [{label}]",
                    current.menu.low.x,
                    later.menu.low.x,
                    ">=",
                    x_tol,
                    tie=_at_lower(current, later),
                    skip=GUARDED_REASON if _guarded(current, later) else None,
                )
            )
        return checks

    def _price_checks(
        self,
        spec: ModelSpec,
        no_risk: SolveReport,
        with_risk: SolveReport,
        p_bar: Optional[float],
        regime: Optional[str],
        v_tol: float,
    ) -> List[OrderingCheck]:
        hat, star = no_risk.menu, with_risk.menu
        tie = _at_lower(no_risk, with_risk)
        guarded = GUARDED_REASON if _guarded(no_risk, with_risk) else None
        breach = spec.risk.breach_probability
        loss_low = spec.risk.loss(TypeSelector.LOW)

        if p_bar is None or regime == "==":
            reason = (
                "p_bar is undefined without a high-type loss"
                if p_bar is None
                else "p equals p_bar"
            )
            return [
                self._check(
                    "4", "t_L ordering", star.low.t, hat.low.t, "<", v_tol, skip=reason
                ),
                self._check(
                    "4",
                    "t_H ordering",
                    star.high.t,
                    hat.high.t,
                    ">",
                    v_tol,
                    skip=reason,
                ),
            ]

        if regime == "<":
            return [
                self._check(
                    "4",
                    "t_L* > t_hat_L* - (1-eta(x_hat_L*))*l_L",
                    star.low.t,
                    hat.low.t - breach(hat.low.x) * loss_low,
                    ">",
                    v_tol,
                    tie=tie,
                    skip=guarded,
                ),
                self._check(
                    "4",
                    "t_H* > t_hat_H*",
                    star.high.t,
                    hat.high.t,
                    ">",
                    v_tol,
                    skip="stated for p > p_bar",
                ),
            ]

        checks = [
            self._check(
                "4",
                "t_L* < t_hat_L*",
                star.low.t,
                hat.low.t,
                "<",
                v_tol,
                tie=tie,
                skip=guarded,
            )
        ]
        breach_low = breach(star.low.x)
        side_reason = None
        if breach_low <= 0.0:
            side_reason = "no breach risk at x_L*; side condition undefined"
        elif 1.0 - breach(star.high.x) / breach_low <= p_bar:
            side_reason = "side condition 1-(1-eta(x_H*))/(1-eta(x_L*)) > p_bar fails"
        checks.append(
            self._check(
                "4",
                "t_H* > t_hat_H*",
                star.high.t,
                hat.high.t,
                ">",
                v_tol,
                tie=tie,
                skip=side_reason or guarded,
            )
        )
        return checks

    def compare(
        self,
        spec: ModelSpec,
        certify: bool = False,
        oracle_steps: Optional[int] = None,
    ) -> ComparisonReport:
        """Solve with the risk stripped and kept, then test the orderings.

        Args:
            spec: instance with a breach-risk model
            certify: also check both second-best menus against the brute-force
                oracle
            oracle_steps: oracle grid resolution per axis

        Returns:
            ComparisonReport with one OrderingCheck per tested inequality
        """
        if isinstance(spec.risk, NoRisk):
            raise ArgumentError("compare needs a spec with a breach-risk model")
        p = spec.prior_high
        if not 0.0 < p < 1.0:
            raise ArgumentError(f"compare needs 0 < prior_high < 1, got {p}")

        plain = spec.without_risk()
        no_risk = self.screening.solve_second_best(plain)
        with_risk = self.screening.solve_second_best(spec)
        thresholds = self.thresholds(spec)
        orderings = self._orderings(spec, no_risk, with_risk, thresholds.p_bar)

        certification = None
        if certify:
            certification = [
                self.oracle.certify(plain, oracle_steps),
                self.oracle.certify(spec, oracle_steps),
            ]

        report = ComparisonReport(
            no_risk=no_risk,
            with_risk=with_risk,
            thresholds=thresholds,
            orderings=orderings,
            certification=certification,
        )
        failures = report.failures()
        if failures:
            logfire.warning(
                "Orderings failed",
                p=p,
                failed=[f"{o.proposition}: {o.inequality}" for o in failures],
            )
        logfire.info(
            "Compared menus with and without risk",
            p=p,
            p_bar=thresholds.p_bar,
            checks=len(orderings),
            failures=len(failures),
            certified=certify,
        )
        return report

    # Sweeps

    @staticmethod
    def _check_grid(grid: Sequence[float]) -> None:
        if not grid:
            raise ArgumentError("prior grid is empty")
        for p in grid:
            if not 0.0 < p < 1.0:
                raise ArgumentError(f"prior grid point {p} is outside (0, 1)")
        for left, right in zip(grid, grid[1:]):
            if not left < right:
                raise ArgumentError(f"prior grid is not increasing at {left}, {right}")

    def sweep_p(
        self, spec: ModelSpec, grid: Sequence[float], jobs: Optional[int] = None
    ) -> SweepTable:
        """First- and second-best reports, risk off and on, at each prior."""
        self._check_grid(grid)
        self.models.ensure_valid(spec)
        workers = jobs or self.tolerances.jobs
        args = [(spec, p, self.tolerances) for p in grid]

        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                # map yields in submission order, whatever finishes first
                chunks = list(executor.map(_sweep_point, *zip(*args)))
        else:
            chunks = [_sweep_point(*arg) for arg in args]

        table = SweepTable(entries=[entry for chunk in chunks for entry in chunk])
        logfire.info(
            "Swept prior grid",
            points=len(grid),
            rows=len(table.entries),
            jobs=workers,
        )
        return table

    def profit_decomposition(
        self, spec: ModelSpec, grid: Sequence[float]
    ) -> List[ProfitTerms]:
        """High- and low-type shares of second-best profit along the grid."""
        self._check_grid(grid)
        terms = []
        for p in grid:
            with_risk = spec.with_prior(p)
            modes = ((False, with_risk.without_risk()), (True, with_risk))
            for risk_on, instance in modes:
                menu = self.screening.solve_second_best(instance).menu
                terms.append(
                    ProfitTerms(
                        p=p,
                        risk_active=risk_on,
                        high_term=p * (menu.high.t - spec.cost.value(menu.high.x)),
                        low_term=(1 - p) * (menu.low.t - spec.cost.value(menu.low.x)),
                    )
                )
        return terms


risk_analysis_service = RiskAnalysisService()


def get_risk_analysis_service() -> RiskAnalysisService:
    """Dependency for getting the risk analysis service."""
    return risk_analysis_service
