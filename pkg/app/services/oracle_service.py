"""Brute-force solver of the full four-constraint screening problem.

For fixed allocations the price problem is a two-variable LP whose optimum
sits at a vertex of the feasible polygon, so prices are exact and only the
allocations are gridded.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Tuple

import logfire
import numpy as np

from app.core.exceptions import ArgumentError, InfeasibleMenuError
from app.models.domain import ModelSpec, TypeSelector
from app.models.schemas.contract import Contract, ContractMenu, Regime
from app.models.schemas.oracle import Certification, InnerOptimum, OracleResult
from app.models.schemas.run_config import SolverTolerances
from app.services.model_service import ModelService
from app.services.screening_service import ScreeningService

LOW = TypeSelector.LOW
HIGH = TypeSelector.HIGH

# Feasibility slack for vertex candidates; vertices are exact up to rounding.
VERTEX_SLACK = 1e-12

BlockResult = Tuple[float, int, int, float, float]


def vertex_prices(a, b, c, d, p: float, slack: float = VERTEX_SLACK):
    """Best (t_low, t_high) under the four constraints, elementwise.

    The constraints are t_L <= a (IR-low), t_H <= b (IR-high),
    t_H - t_L <= c (IC-high) and t_H - t_L >= d (IC-low). The boundaries of
    IC-high and IC-low are parallel, which leaves five candidate vertices.
    Infeasible cells come back with value -inf.
    """
    a, b, c, d = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (a, b, c, d))
    )
    candidates = (
        (a, b),
        (a, a + c),
        (a, a + d),
        (b - c, b),
        (b - d, b),
    )
    best_value = np.full(a.shape, -np.inf)
    best_low = np.full(a.shape, np.nan)
    best_high = np.full(a.shape, np.nan)
    for t_low, t_high in candidates:
        spread = t_high - t_low
        feasible = (
            (t_low <= a + slack)
            & (t_high <= b + slack)
            & (spread <= c + slack)
            & (spread >= d - slack)
        )
        value = np.where(feasible, (1 - p) * t_low + p * t_high, -np.inf)
        better = value > best_value
        best_value = np.where(better, value, best_value)
        best_low = np.where(better, t_low, best_low)
        best_high = np.where(better, t_high, best_high)
    return best_low, best_high, best_value


def _solve_block(
    u_low: np.ndarray,
    u_high: np.ndarray,
    cost: np.ndarray,
    p: float,
    start: int,
    stop: int,
) -> BlockResult:
    """Best menu with x_L taken from rows [start, stop) of the grid."""
    rows = slice(start, stop)
    i = np.arange(start, stop)[:, None]
    j = np.arange(u_low.size)[None, :]

    a = u_low[rows][:, None]
    b = u_high[None, :]
    c = u_high[None, :] - u_high[rows][:, None]
    d = u_low[None, :] - u_low[rows][:, None]
    t_low, t_high, _ = vertex_prices(a, b, c, d, p)

    profit = (1 - p) * (t_low - cost[rows][:, None]) + p * (t_high - cost[None, :])
    profit = np.where((j >= i) & np.isfinite(profit), profit, -np.inf)

    # argmax returns the first maximum in row-major order, i.e. the
    # lexicographically smallest (x_L, x_H) among ties
    k = int(np.argmax(profit))
    r, col = divmod(k, u_low.size)
    return (
        float(profit[r, col]),
        start + r,
        col,
        float(t_low[r, col]),
        float(t_high[r, col]),
    )


class OracleService:
    """Grid-in-allocations, exact-in-prices optimum of the screening problem."""

    def __init__(self, tolerances: Optional[SolverTolerances] = None):
        self.tolerances = tolerances or SolverTolerances()
        self.models = ModelService(self.tolerances)
        self.screening = ScreeningService(self.tolerances)

    def inner_price_optimum(
        self, spec: ModelSpec, x_low: float, x_high: float
    ) -> InnerOptimum:
        """Exact profit-maximizing prices for the allocations given."""
        u = self.models.effective_utility
        a = u(spec, x_low, LOW)
        b = u(spec, x_high, HIGH)
        c = b - u(spec, x_low, HIGH)
        d = u(spec, x_high, LOW) - a
        p = spec.prior_high
        t_low, t_high, value = vertex_prices(a, b, c, d, p)
        if not np.isfinite(value):
            raise InfeasibleMenuError(
                f"no prices satisfy the constraints at x_low={x_low}, x_high={x_high}"
            )
        t_low, t_high = float(t_low), float(t_high)
        profit = (1 - p) * (t_low - spec.cost.value(x_low)) + p * (
            t_high - spec.cost.value(x_high)
        )
        return InnerOptimum(t_low=t_low, t_high=t_high, profit=profit)

    def solve_p1_bruteforce(
        self, spec: ModelSpec, x_steps: Optional[int] = None, jobs: Optional[int] = None
    ) -> OracleResult:
        """Best menu over an x_steps × x_steps allocation grid with x_L <= x_H."""
        steps = x_steps or self.tolerances.oracle_steps
        workers = jobs or self.tolerances.jobs
        if steps < 2:
            raise ArgumentError(f"x_steps must be at least 2, got {steps}")
        p = spec.prior_high

        grid = np.array(spec.interval.grid(steps))
        u_low = np.array([self.models.evaluate(spec, x, LOW) for x in grid])
        u_high = np.array([self.models.evaluate(spec, x, HIGH) for x in grid])
        cost = np.array([spec.cost.value(x) for x in grid])

        block = self.tolerances.oracle_block_rows
        bounds = [(s, min(s + block, steps)) for s in range(0, steps, block)]
        args = [(u_low, u_high, cost, p, s, e) for s, e in bounds]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                results: List[BlockResult] = list(
                    executor.map(_solve_block, *zip(*args))
                )
        else:
            results = [_solve_block(*arg) for arg in args]

        best = results[0]
        for candidate in results[1:]:
            if candidate[0] > best[0]:
                best = candidate
        profit, i, j, t_low, t_high = best
        if not np.isfinite(profit):
            raise InfeasibleMenuError("no feasible menu on the allocation grid")

        menu = ContractMenu(
            low=Contract(x=float(grid[i]), t=t_low),
            high=Contract(x=float(grid[j]), t=t_high),
            regime=Regime.SECOND_BEST,
            risk_active=spec.risk_active,
        )
        residuals = self.screening.verify_menu(spec, menu)
        step = spec.interval.width / (steps - 1)
        gap = self._gap_bound(spec, grid, u_low, u_high, step)
        logfire.info(
            "Brute-force optimum",
            x_steps=steps,
            p=p,
            profit=profit,
            x_low=menu.low.x,
            x_high=menu.high.x,
            gap_bound=gap,
        )
        return OracleResult(
            menu=menu,
            profit=profit,
            x_grid_step=step,
            certified_gap_bound=gap,
            residuals=residuals,
            binding=residuals.binding(self.tolerances.feas_tol),
        )

    def certify(self, spec: ModelSpec, x_steps: Optional[int] = None) -> Certification:
        """Compare the screening solver's profit with the brute-force optimum."""
        report = self.screening.solve_second_best(spec)
        oracle = self.solve_p1_bruteforce(spec, x_steps)
        gap = abs(report.profit - oracle.profit)
        return Certification(
            risk_active=spec.risk_active,
            solver_profit=report.profit,
            oracle_profit=oracle.profit,
            gap=gap,
            certified_gap_bound=oracle.certified_gap_bound,
            within_bound=gap <= oracle.certified_gap_bound + self.tolerances.feas_tol,
            oracle_binding=oracle.binding,
        )

    def _gap_bound(
        self,
        spec: ModelSpec,
        grid: np.ndarray,
        u_low: np.ndarray,
        u_high: np.ndarray,
        step: float,
    ) -> float:
        """(L_L + L_H)·h/2 from slopes of the profit of the best prices."""
        p = spec.prior_high
        if spec.differentiable:
            s_low = np.array([self.models.evaluate_slope(spec, x, LOW) for x in grid])
            s_high = np.array([self.models.evaluate_slope(spec, x, HIGH) for x in grid])
            s_cost = np.array([spec.cost.slope(x) for x in grid])
        else:
            cost = np.array([spec.cost.value(x) for x in grid])
            s_low = np.diff(u_low) / step
            s_high = np.diff(u_high) / step
            s_cost = np.diff(cost) / step
        own_low = (1 - p) * (s_low - s_cost)
        with_rent = own_low - p * (s_high - s_low)
        lipschitz_low = float(np.max(np.maximum(np.abs(own_low), np.abs(with_rent))))
        lipschitz_high = float(np.max(np.abs(p * (s_high - s_cost))))
        return (lipschitz_low + lipschitz_high) * step / 2


oracle_service = OracleService()
