from typing import List, Optional

import logfire

from app.core.exceptions import ArgumentError, InfeasibleMenuError
from app.models.domain import ModelSpec, TypeSelector
from app.models.schemas.contract import (
    ConstraintResiduals,
    Contract,
    ContractMenu,
    ReductionKind,
    Regime,
    SolveReport,
)
from app.models.schemas.optimization import BoundaryFlag, OptResult
from app.models.schemas.run_config import SolverTolerances
from app.services.model_service import ModelService
from app.services.optimizer_service import maximize_concave

LOW = TypeSelector.LOW
HIGH = TypeSelector.HIGH


class ScreeningService:
    """First-best and second-best contract design for two consumer types."""

    def __init__(self, tolerances: Optional[SolverTolerances] = None):
        self.tolerances = tolerances or SolverTolerances()
        self.models = ModelService(self.tolerances)

    # Allocation kernels

    def _maximize(self, spec: ModelSpec, f, slope) -> OptResult:
        return maximize_concave(
            f,
            slope if spec.differentiable else None,
            spec.interval,
            self.tolerances.tol,
        )

    def first_best_allocation(self, spec: ModelSpec, theta: TypeSelector) -> OptResult:
        """argmax of U(x, θ) − g(x) over the interval."""
        utility = self.models.utility_fn(spec, theta)
        utility_slope = self.models.utility_slope_fn(spec, theta)
        return self._maximize(
            spec,
            lambda x: utility(x) - spec.cost.value(x),
            lambda x: utility_slope(x) - spec.cost.slope(x),
        )

    def reduced_low_allocation(
        self, spec: ModelSpec, prior_high: Optional[float] = None
    ) -> OptResult:
        """argmax of U(x, θ_L) − p·U(x, θ_H) − (1 − p)·g(x) on the interval."""
        p = spec.prior_high if prior_high is None else prior_high
        u_low = self.models.utility_fn(spec, LOW)
        u_high = self.models.utility_fn(spec, HIGH)
        s_low = self.models.utility_slope_fn(spec, LOW)
        s_high = self.models.utility_slope_fn(spec, HIGH)
        return self._maximize(
            spec,
            lambda x: u_low(x) - p * u_high(x) - (1 - p) * spec.cost.value(x),
            lambda x: s_low(x) - p * s_high(x) - (1 - p) * spec.cost.slope(x),
        )

    def guarded_low_allocation(self, spec: ModelSpec) -> OptResult:
        """Low allocation when the high type's participation may bind.

        Maximizes (1 − p)(U(x, θ_L) − g(x)) − p·max(0, R(x)) where
        R(x) = U(x, θ_H) − U(x, θ_L). This is the profit of the best prices
        for a fixed x_L.
        """
        p = spec.prior_high
        u_low = self.models.utility_fn(spec, LOW)
        u_high = self.models.utility_fn(spec, HIGH)
        s_low = self.models.utility_slope_fn(spec, LOW)
        s_high = self.models.utility_slope_fn(spec, HIGH)

        def objective(x: float) -> float:
            gap = u_high(x) - u_low(x)
            return (1 - p) * (u_low(x) - spec.cost.value(x)) - p * max(0.0, gap)

        def slope(x: float) -> float:
            own = (1 - p) * (s_low(x) - spec.cost.slope(x))
            if u_high(x) - u_low(x) >= 0:
                return own - p * (s_high(x) - s_low(x))
            return own

        return self._maximize(spec, objective, slope)

    # Operations

    def solve_first_best(self, spec: ModelSpec) -> SolveReport:
        """Full-information menu: each type gets its efficient x at its full value."""
        self.models.ensure_valid(spec)
        low = self.first_best_allocation(spec, LOW)
        high = self.first_best_allocation(spec, HIGH)
        menu = ContractMenu(
            low=Contract(x=low.argmax, t=self.models.evaluate(spec, low.argmax, LOW)),
            high=Contract(
                x=high.argmax, t=self.models.evaluate(spec, high.argmax, HIGH)
            ),
            regime=Regime.FIRST_BEST,
            risk_active=spec.risk_active,
        )
        report = self._report(spec, menu, low.at_boundary, high.at_boundary, None)
        logfire.debug(
            "Solved first-best menu",
            p=spec.prior_high,
            risk_active=spec.risk_active,
            x_low=menu.low.x,
            x_high=menu.high.x,
            implementable=report.feasible,
        )
        return report

    def solve_second_best(self, spec: ModelSpec) -> SolveReport:
        """Hidden-type menu through the reduction to IR-low and IC-high.

        The four original constraints are re-checked on the result. When the
        reduced menu leaves the high type below its outside option, the low
        allocation is re-solved with that participation constraint priced in.
        """
        p = spec.prior_high
        if not 0.0 < p < 1.0:
            raise ArgumentError(f"second-best needs 0 < prior_high < 1, got {p}")
        self.models.ensure_valid(spec)

        high = self.first_best_allocation(spec, HIGH)
        low = self.reduced_low_allocation(spec)
        reduction = ReductionKind.IR_LOW_IC_HIGH
        menu = self._reduced_menu(spec, low.argmax, high.argmax)
        residuals = self.verify_menu(spec, menu)

        if residuals.ir_high < -self.tolerances.feas_tol:
            logfire.info(
                "High-type participation binds, re-solving low allocation",
                p=p,
                x_low=low.argmax,
                ir_high=residuals.ir_high,
            )
            low = self.guarded_low_allocation(spec)
            reduction = ReductionKind.PARTICIPATION_GUARDED
            menu = self._guarded_menu(spec, low.argmax, high.argmax)

        report = self._report(spec, menu, low.at_boundary, high.at_boundary, reduction)
        if not report.feasible:
            logfire.error(
                "Second-best menu violates an original constraint",
                p=p,
                residuals=report.residuals.model_dump(),
            )
            raise InfeasibleMenuError(
                f"second-best menu is infeasible: {report.residuals.model_dump()}"
            )
        if menu.low.x > menu.high.x + self.tolerances.tol:
            raise InfeasibleMenuError(
                f"x_low={menu.low.x} exceeds x_high={menu.high.x}; sorting is broken"
            )
        if abs(menu.high.x - menu.low.x) <= self.tolerances.tol:
            logfire.info("Second-best menu pools both types", x=menu.low.x, p=p)

        logfire.debug(
            "Solved second-best menu",
            p=p,
            risk_active=spec.risk_active,
            reduction=reduction.value,
            x_low=menu.low.x,
            x_high=menu.high.x,
            profit=report.profit,
            iterations=low.iterations + high.iterations,
        )
        return report

    def verify_menu(self, spec: ModelSpec, menu: ContractMenu) -> ConstraintResiduals:
        """Residuals of both incentive and both participation constraints under U."""
        x_low, x_high = menu.low.x, menu.high.x
        u_hh = self.models.effective_utility(spec, x_high, HIGH)
        u_hl = self.models.effective_utility(spec, x_low, HIGH)
        u_ll = self.models.effective_utility(spec, x_low, LOW)
        u_lh = self.models.effective_utility(spec, x_high, LOW)
        t_low, t_high = menu.low.t, menu.high.t
        return ConstraintResiduals(
            ic_high=(u_hh - t_high) - (u_hl - t_low),
            ic_low=(u_ll - t_low) - (u_lh - t_high),
            ir_low=u_ll - t_low,
            ir_high=u_hh - t_high,
        )

    def binding_pattern(
        self, residuals: ConstraintResiduals, feas_tol: Optional[float] = None
    ) -> List[str]:
        """Constraints holding with equality.

        Listed in ir_low, ic_high, ic_low, ir_high order.
        """
        if feas_tol is None:
            feas_tol = self.tolerances.feas_tol
        return residuals.binding(feas_tol)

    def information_rent(self, spec: ModelSpec, report: SolveReport) -> float:
        """What the high type keeps because its type is hidden."""
        if report.menu.regime is Regime.FIRST_BEST:
            raise ArgumentError("information rent is defined for second-best reports")
        return self._rent(spec, report.menu, report.reduction)

    def profit(self, spec: ModelSpec, menu: ContractMenu) -> float:
        """(1 − p)(t_L − g(x_L)) + p(t_H − g(x_H))."""
        p = spec.prior_high
        return (1 - p) * (menu.low.t - spec.cost.value(menu.low.x)) + p * (
            menu.high.t - spec.cost.value(menu.high.x)
        )

    def welfare(self, spec: ModelSpec, report: SolveReport) -> float:
        """Expected profit plus expected consumer surplus."""
        return self._welfare(spec, report.menu)

    def evaluate_menu(self, spec: ModelSpec, menu: ContractMenu) -> SolveReport:
        """Diagnostics for a menu that did not come from a solver."""
        flags = [self._boundary(spec, c.x) for c in (menu.low, menu.high)]
        reduction = None
        if menu.regime is Regime.SECOND_BEST:
            reduction = ReductionKind.IR_LOW_IC_HIGH
        return self._report(spec, menu, flags[0], flags[1], reduction)

    # Helpers

    def _reduced_menu(
        self, spec: ModelSpec, x_low: float, x_high: float
    ) -> ContractMenu:
        t_low = self.models.evaluate(spec, x_low, LOW)
        t_high = (
            t_low
            + self.models.evaluate(spec, x_high, HIGH)
            - self.models.evaluate(spec, x_low, HIGH)
        )
        return ContractMenu(
            low=Contract(x=x_low, t=t_low),
            high=Contract(x=x_high, t=t_high),
            regime=Regime.SECOND_BEST,
            risk_active=spec.risk_active,
        )

    def _guarded_menu(
        self, spec: ModelSpec, x_low: float, x_high: float
    ) -> ContractMenu:
        t_low = self.models.evaluate(spec, x_low, LOW)
        gap = self.models.evaluate(spec, x_low, HIGH) - t_low
        t_high = self.models.evaluate(spec, x_high, HIGH) - max(0.0, gap)
        return ContractMenu(
            low=Contract(x=x_low, t=t_low),
            high=Contract(x=x_high, t=t_high),
            regime=Regime.SECOND_BEST,
            risk_active=spec.risk_active,
        )

    def _rent(
        self, spec: ModelSpec, menu: ContractMenu, reduction: Optional[ReductionKind]
    ) -> float:
        if menu.regime is Regime.FIRST_BEST:
            return self.models.evaluate(spec, menu.high.x, HIGH) - menu.high.t
        x_low = menu.low.x
        gap = self.models.evaluate(spec, x_low, HIGH) - self.models.evaluate(
            spec, x_low, LOW
        )
        if reduction is ReductionKind.PARTICIPATION_GUARDED:
            return max(0.0, gap)
        return gap

    def _welfare(self, spec: ModelSpec, menu: ContractMenu) -> float:
        p = spec.prior_high
        surplus_high = self.models.evaluate(spec, menu.high.x, HIGH) - menu.high.t
        surplus_low = self.models.evaluate(spec, menu.low.x, LOW) - menu.low.t
        return self.profit(spec, menu) + p * surplus_high + (1 - p) * surplus_low

    def _boundary(self, spec: ModelSpec, x: float) -> BoundaryFlag:
        if x <= spec.interval.x_min:
            return BoundaryFlag.LOWER
        if x >= spec.interval.x_max:
            return BoundaryFlag.UPPER
        return BoundaryFlag.INTERIOR

    def _report(
        self,
        spec: ModelSpec,
        menu: ContractMenu,
        boundary_low: BoundaryFlag,
        boundary_high: BoundaryFlag,
        reduction: Optional[ReductionKind],
    ) -> SolveReport:
        residuals = self.verify_menu(spec, menu)
        feas_tol = self.tolerances.feas_tol
        return SolveReport(
            menu=menu,
            residuals=residuals,
            prior_high=spec.prior_high,
            information_rent=self._rent(spec, menu, reduction),
            profit=self.profit(spec, menu),
            welfare=self._welfare(spec, menu),
            boundary_low=boundary_low,
            boundary_high=boundary_high,
            binding=self.binding_pattern(residuals, feas_tol),
            feasible=residuals.feasible(feas_tol),
            reduction=reduction,
        )


screening_service = ScreeningService()


def get_screening_service() -> ScreeningService:
    """Dependency for getting the screening service."""
    return screening_service
