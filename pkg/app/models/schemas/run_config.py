from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings
from app.core.exceptions import ArgumentError
from app.models.domain import (
    LinearBreachRisk,
    LinearInTypeUtility,
    ModelSpec,
    NoRisk,
    PrivacyInterval,
    QuadraticCost,
    TypePair,
)
from app.models.schemas.base import BaseSchema


class SolverTolerances(BaseSchema):
    """Numerical knobs shared by the services."""

    tol: float = Field(default_factory=lambda: settings.OPT_TOL, gt=0)
    feas_tol: float = Field(default_factory=lambda: settings.FEAS_TOL, gt=0)
    assumption_tol: float = Field(default_factory=lambda: settings.ASSUMPTION_TOL, ge=0)
    validation_grid: int = Field(default_factory=lambda: settings.VALIDATION_GRID, ge=3)
    threshold_tol: float = Field(default_factory=lambda: settings.THRESHOLD_TOL, gt=0)
    threshold_max_iter: int = Field(
        default_factory=lambda: settings.THRESHOLD_MAX_ITER, ge=1
    )
    oracle_steps: int = Field(default_factory=lambda: settings.ORACLE_STEPS, ge=2)
    oracle_block_rows: int = Field(
        default_factory=lambda: settings.ORACLE_BLOCK_ROWS, ge=1
    )
    jobs: int = Field(default_factory=lambda: settings.SWEEP_JOBS, ge=1)


class GridSpec(BaseSchema):
    """``p_min,p_max,n``: n evenly spaced priors including both ends."""

    p_min: float
    p_max: float
    n: int

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 3:
            raise ArgumentError(f"grid must look like 'p_min,p_max,n', got {text!r}")
        try:
            p_min, p_max, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ArgumentError(f"grid {text!r} is not numeric: {exc}") from exc
        if n < 2:
            raise ArgumentError(f"grid needs at least 2 points, got n={n}")
        if not 0.0 < p_min < p_max < 1.0:
            raise ArgumentError(
                f"grid bounds must satisfy 0 < p_min < p_max < 1, got {p_min}, {p_max}"
            )
        return cls(p_min=p_min, p_max=p_max, n=n)

    def points(self) -> List[float]:
        step = (self.p_max - self.p_min) / (self.n - 1)
        values = [self.p_min + i * step for i in range(self.n - 1)]
        values.append(self.p_max)
        return values


class ConfigSection(BaseModel):
    """Config file sections reject unknown keys."""

    model_config = ConfigDict(extra="forbid")


class TypesSection(ConfigSection):
    theta_low: float
    theta_high: float
    prior_high: float


class IntervalSection(ConfigSection):
    x_min: float
    x_max: float


class UtilitySection(ConfigSection):
    kind: Literal["linear_in_type"] = "linear_in_type"


class CostSection(ConfigSection):
    kind: Literal["quadratic"] = "quadratic"
    zeta: float


class RiskSection(ConfigSection):
    kind: Literal["none", "linear_breach"] = "none"
    m: float = 0.0
    loss_low: float = 0.0
    loss_high: float = 0.0


class RunSection(ConfigSection):
    """Per-run overrides; anything left out falls back to the settings."""

    tol: Optional[float] = None
    feas_tol: Optional[float] = None
    assumption_tol: Optional[float] = None
    validation_grid: Optional[int] = None
    threshold_tol: Optional[float] = None
    threshold_max_iter: Optional[int] = None
    oracle_steps: Optional[int] = None
    jobs: Optional[int] = None
    grid: Optional[str] = None


class ModelConfig(ConfigSection):
    """A problem instance in config form, as read from TOML or a request body."""

    types: TypesSection
    interval: IntervalSection
    utility: UtilitySection = UtilitySection()
    cost: CostSection
    risk: RiskSection = RiskSection()

    def to_model_spec(self) -> ModelSpec:
        if self.risk.kind == "linear_breach":
            risk = LinearBreachRisk(
                m=self.risk.m,
                loss_low=self.risk.loss_low,
                loss_high=self.risk.loss_high,
            )
        else:
            risk = NoRisk()
        return ModelSpec(
            types=TypePair(**self.types.model_dump()),
            interval=PrivacyInterval(**self.interval.model_dump()),
            utility=LinearInTypeUtility(),
            cost=QuadraticCost(zeta=self.cost.zeta),
            risk=risk,
        )


class RunConfig(ModelConfig):
    """Everything a CLI run reads from its config file."""

    run: RunSection = RunSection()

    def tolerances(self) -> SolverTolerances:
        overrides = self.run.model_dump(exclude_none=True, exclude={"grid"})
        return SolverTolerances(**overrides)
