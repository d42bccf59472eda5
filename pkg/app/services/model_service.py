import math
from typing import Callable, List, Optional

import logfire

from app.core.exceptions import DomainError, SpecValidationError
from app.models.domain import (
    CustomCost,
    CustomUtility,
    LinearBreachRisk,
    LinearInTypeUtility,
    ModelSpec,
    NoRisk,
    QuadraticCost,
    TypeSelector,
)
from app.models.schemas.run_config import SolverTolerances
from app.models.schemas.validation import ValidationReport, Violation
from app.services.optimizer_service import maximize_concave


class ModelService:
    """Evaluation and validation of problem instances."""

    def __init__(self, tolerances: Optional[SolverTolerances] = None):
        self.tolerances = tolerances or SolverTolerances()

    @staticmethod
    def _check_domain(spec: ModelSpec, x: float) -> None:
        if not spec.interval.contains(x):
            raise DomainError(x, spec.interval.x_min, spec.interval.x_max)

    def effective_utility(
        self, spec: ModelSpec, x: float, theta: TypeSelector
    ) -> float:
        """U(x, θ) = Û(x, θ) − (1 − η(x))ℓ(θ)."""
        self._check_domain(spec, x)
        return self.evaluate(spec, x, theta)

    def effective_utility_slope(
        self, spec: ModelSpec, x: float, theta: TypeSelector
    ) -> float:
        """∂U/∂x = ∂Û/∂x + η′(x)ℓ(θ)."""
        self._check_domain(spec, x)
        return self.evaluate_slope(spec, x, theta)

    # Unchecked variants for the solvers, whose iterates never leave the interval.

    @staticmethod
    def evaluate(spec: ModelSpec, x: float, theta: TypeSelector) -> float:
        base = spec.utility.value(x, spec.types.theta(theta))
        if not spec.risk.active:
            return base
        return base - spec.risk.breach_probability(x) * spec.risk.loss(theta)

    @staticmethod
    def evaluate_slope(spec: ModelSpec, x: float, theta: TypeSelector) -> float:
        base = spec.utility.slope(x, spec.types.theta(theta))
        if not spec.risk.active:
            return base
        return base + spec.risk.eta_slope(x) * spec.risk.loss(theta)

    def utility_fn(
        self, spec: ModelSpec, theta: TypeSelector
    ) -> Callable[[float], float]:
        return lambda x: self.evaluate(spec, x, theta)

    def utility_slope_fn(
        self, spec: ModelSpec, theta: TypeSelector
    ) -> Callable[[float], float]:
        return lambda x: self.evaluate_slope(spec, x, theta)

    @staticmethod
    def strip_risk(spec: ModelSpec) -> ModelSpec:
        return spec.without_risk()

    def validate(
        self, spec: ModelSpec, grid_points: Optional[int] = None
    ) -> ValidationReport:
        """Check the type invariants and Assumptions A–D on a grid."""
        points = grid_points or self.tolerances.validation_grid
        tol = self.tolerances.assumption_tol
        violations: List[Violation] = []
        advisories: List[Violation] = []

        types = spec.types
        interval = spec.interval
        numbers = [types.theta_low, types.theta_high, types.prior_high]
        numbers += [interval.x_min, interval.x_max]
        if not all(math.isfinite(v) for v in numbers):
            violations.append(
                Violation(assumption="finite", message="parameters must be finite")
            )
            return ValidationReport(
                violations=violations, advisories=advisories, grid_points=points
            )

        if not types.theta_low < types.theta_high:
            violations.append(
                Violation(
                    assumption="TypePair",
                    message=(
                        f"theta_low={types.theta_low} must be below "
                        f"theta_high={types.theta_high}"
                    ),
                )
            )
        if not 0.0 <= types.prior_high <= 1.0:
            violations.append(
                Violation(
                    assumption="TypePair",
                    message=f"prior_high={types.prior_high} is not a probability",
                )
            )
        if not interval.x_min < interval.x_max:
            violations.append(
                Violation(
                    assumption="PrivacyInterval",
                    message=(
                        f"x_min={interval.x_min} must be below x_max={interval.x_max}"
                    ),
                )
            )
            # Nothing else can be checked without an interval
            return ValidationReport(
                violations=violations, advisories=advisories, grid_points=points
            )

        violations += self._check_parameters(spec)
        if violations:
            return ValidationReport(
                violations=violations, advisories=advisories, grid_points=points
            )

        grid = interval.grid(points)
        violations += self._check_risk_probability(spec, grid, tol)
        if isinstance(spec.utility, CustomUtility):
            violations += self._check_base_utility(spec, grid, tol)
        if isinstance(spec.cost, CustomCost):
            violations += self._check_cost(spec, grid, tol)
        violations += self._check_effective_utility(spec, grid, tol)
        if not violations:
            violations += self._check_participation_at_top(spec)
        advisories += self._check_type_monotonicity(spec, grid, tol)

        report = ValidationReport(
            violations=violations, advisories=advisories, grid_points=points
        )
        logfire.debug(
            "Validated model spec",
            valid=report.valid,
            violations=len(report.violations),
            advisories=len(report.advisories),
        )
        return report

    def ensure_valid(self, spec: ModelSpec) -> ValidationReport:
        report = self.validate(spec)
        if not report.valid:
            logfire.warning(
                "Rejected invalid model spec",
                violations=[v.message for v in report.violations],
            )
            raise SpecValidationError(report)
        return report

    @staticmethod
    def _check_parameters(spec: ModelSpec) -> List[Violation]:
        violations = []
        if isinstance(spec.utility, LinearInTypeUtility) and spec.types.theta_low <= 0:
            violations.append(
                Violation(
                    assumption="A",
                    message=(
                        "linear utility needs theta_low > 0 to be strictly "
                        "increasing in x"
                    ),
                )
            )
        if isinstance(spec.cost, QuadraticCost):
            if not (math.isfinite(spec.cost.zeta) and spec.cost.zeta > 0):
                violations.append(
                    Violation(
                        assumption="C", message=f"zeta={spec.cost.zeta} must be > 0"
                    )
                )
            if spec.interval.x_min < 0:
                violations.append(
                    Violation(
                        assumption="C",
                        message="quadratic cost is not increasing on negative x",
                        witness_x=spec.interval.x_min,
                    )
                )
        risk = spec.risk
        if not isinstance(risk, NoRisk):
            if risk.loss_low < 0 or risk.loss_high < 0:
                violations.append(
                    Violation(assumption="D", message="breach losses must be >= 0")
                )
            if risk.loss_low > risk.loss_high:
                violations.append(
                    Violation(
                        assumption="D",
                        message=(
                            f"loss_low={risk.loss_low} > loss_high={risk.loss_high}: "
                            "loss is not increasing in type"
                        ),
                    )
                )
        if isinstance(risk, LinearBreachRisk) and risk.m < 0:
            violations.append(
                Violation(assumption="D", message=f"m={risk.m} must be >= 0")
            )
        return violations

    @staticmethod
    def _check_risk_probability(
        spec: ModelSpec, grid: List[float], tol: float
    ) -> List[Violation]:
        risk = spec.risk
        if not risk.active:
            return []
        violations = []
        for x in grid:
            q = risk.breach_probability(x)
            if not -tol <= q <= 1.0 + tol:
                violations.append(
                    Violation(
                        assumption="D",
                        message=(
                            f"breach probability 1-eta(x)={q:g} is not a probability"
                        ),
                        witness_x=x,
                    )
                )
                break
        # The linear family has η' = m >= 0; m = 0 is the zero-risk limit.
        if not isinstance(risk, LinearBreachRisk):
            for left, right in zip(grid, grid[1:]):
                if risk.breach_probability(right) > risk.breach_probability(left) + tol:
                    violations.append(
                        Violation(
                            assumption="D",
                            message="eta is not increasing in x",
                            witness_x=right,
                        )
                    )
                    break
        return violations

    @staticmethod
    def _check_base_utility(
        spec: ModelSpec, grid: List[float], tol: float
    ) -> List[Violation]:
        violations = []
        utility = spec.utility
        lo, hi = spec.types.theta_low, spec.types.theta_high
        for x in grid:
            if utility.value(x, hi) <= utility.value(x, lo) - tol:
                violations.append(
                    Violation(
                        assumption="A",
                        message="base utility is not increasing in type",
                        witness_x=x,
                    )
                )
                break
        return violations

    @staticmethod
    def _check_cost(spec: ModelSpec, grid: List[float], tol: float) -> List[Violation]:
        violations = []
        values = [spec.cost.value(x) for x in grid]
        for i in range(1, len(grid)):
            if values[i] <= values[i - 1] - tol:
                violations.append(
                    Violation(
                        assumption="C",
                        message="cost is not increasing",
                        witness_x=grid[i],
                    )
                )
                break
        for i in range(1, len(grid) - 1):
            if values[i - 1] - 2 * values[i] + values[i + 1] < -tol:
                violations.append(
                    Violation(
                        assumption="C", message="cost is not convex", witness_x=grid[i]
                    )
                )
                break
        return violations

    def _check_effective_utility(
        self, spec: ModelSpec, grid: List[float], tol: float
    ) -> List[Violation]:
        violations = []
        rows = {
            theta: [self.evaluate(spec, x, theta) for x in grid]
            for theta in TypeSelector
        }
        for theta, values in rows.items():
            for i in range(1, len(grid)):
                if values[i] <= values[i - 1] - tol:
                    violations.append(
                        Violation(
                            assumption="A",
                            message=(
                                f"utility of the {theta.value} type "
                                "is not increasing in x"
                            ),
                            witness_x=grid[i],
                        )
                    )
                    break
            for i in range(1, len(grid) - 1):
                if values[i - 1] - 2 * values[i] + values[i + 1] > tol:
                    violations.append(
                        Violation(
                            assumption="A",
                            message=(
                                f"utility of the {theta.value} type is not concave in x"
                            ),
                            witness_x=grid[i],
                        )
                    )
                    break
        gap = [h - l for h, l in zip(rows[TypeSelector.HIGH], rows[TypeSelector.LOW])]
        for i in range(1, len(grid)):
            if gap[i] < gap[i - 1] - tol:
                violations.append(
                    Violation(
                        assumption="B",
                        message=(
                            "sorting condition fails: U(x,high) - U(x,low) decreases"
                        ),
                        witness_x=grid[i],
                    )
                )
                break
        return violations

    def _check_participation_at_top(self, spec: ModelSpec) -> List[Violation]:
        """U(x, θ_H) must not fall below U(x, θ_L) at the high type's efficient x.

        Otherwise no menu serving both types at x_H† satisfies IC-low and
        IR-high together.
        """
        if not spec.risk_active:
            return []
        high = self.utility_fn(spec, TypeSelector.HIGH)
        low = self.utility_fn(spec, TypeSelector.LOW)
        slope = self.utility_slope_fn(spec, TypeSelector.HIGH)
        top = maximize_concave(
            lambda x: high(x) - spec.cost.value(x),
            (lambda x: slope(x) - spec.cost.slope(x)) if spec.differentiable else None,
            spec.interval,
            self.tolerances.tol,
        ).argmax
        gap = high(top) - low(top)
        if gap >= -self.tolerances.feas_tol:
            return []
        return [
            Violation(
                assumption="A",
                message=(
                    f"at the high type's efficient x={top:g} breach losses leave it "
                    f"valuing x below the low type (gap {gap:g}); no menu can keep "
                    "both types participating without distorting the top"
                ),
                witness_x=top,
            )
        ]

    def _check_type_monotonicity(
        self, spec: ModelSpec, grid: List[float], tol: float
    ) -> List[Violation]:
        crossing = [
            x
            for x in grid
            if self.evaluate(spec, x, TypeSelector.HIGH)
            < self.evaluate(spec, x, TypeSelector.LOW) - tol
        ]
        if not crossing:
            return []
        return [
            Violation(
                assumption="A",
                message=(
                    "with breach losses the high type values x below the low type "
                    f"on [{crossing[0]:g}, {crossing[-1]:g}]; second-best menus "
                    "there are pinned by the high type's participation"
                ),
                witness_x=crossing[-1],
            )
        ]


model_service = ModelService()


def get_model_service() -> ModelService:
    """Dependency for getting the model service."""
    return model_service
