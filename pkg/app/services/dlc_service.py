"""Closed forms for the direct-load-control example.

Utility x·θ, cost ½ζx², breach probability m(1 − x), privacy interval [0, 1].
These formulas are the analytic reference the numeric solvers are tested
against; when an allocation leaves [0, 1] the formulas stop describing the
interval-constrained optimum and the result is only flagged.
"""

from typing import Tuple

from pydantic import ValidationError

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
from app.models.schemas.analysis import Thresholds
from app.models.schemas.contract import Contract, ContractMenu, Regime
from app.models.schemas.dlc import ClosedFormSolution, DlcParams


def _clamp(x: float) -> Tuple[float, bool, bool]:
    if x < 0.0:
        return 0.0, True, False
    if x > 1.0:
        return 1.0, False, True
    return x, False, False


def _checked(params: DlcParams) -> DlcParams:
    """Raise ArgumentError unless the parameters pass DlcParams validation."""
    try:
        return DlcParams.model_validate(params.model_dump())
    except ValidationError as exc:
        raise ArgumentError(f"invalid direct-load-control parameters: {exc}") from exc


class DlcService:
    """Analytic first-best, second-best and critical priors."""

    @staticmethod
    def to_model_spec(params: DlcParams, risk: bool = True) -> ModelSpec:
        """The equivalent ModelSpec on [0, 1]."""
        return ModelSpec(
            types=TypePair(
                theta_low=params.theta_low,
                theta_high=params.theta_high,
                prior_high=params.prior_high,
            ),
            interval=PrivacyInterval(x_min=0.0, x_max=1.0),
            utility=LinearInTypeUtility(),
            cost=QuadraticCost(zeta=params.zeta),
            risk=(
                LinearBreachRisk(
                    m=params.m, loss_low=params.loss_low, loss_high=params.loss_high
                )
                if risk
                else NoRisk()
            ),
        )

    @staticmethod
    def utility(
        params: DlcParams, x: float, theta: float, loss: float, risk: bool
    ) -> float:
        """x·θ − m(1 − x)ℓ, or x·θ without risk."""
        if not risk:
            return x * theta
        return x * theta - params.m * (1.0 - x) * loss

    def closed_form_first_best(
        self, params: DlcParams, risk: bool
    ) -> ClosedFormSolution:
        """x† = (θ + mℓ(θ))/ζ and t† = U(x†, θ) per type."""
        params = _checked(params)
        m = params.m if risk else 0.0
        contracts = []
        lower = upper = False
        for theta, loss in (
            (params.theta_low, params.loss_low),
            (params.theta_high, params.loss_high),
        ):
            x, lo, hi = _clamp((theta + m * loss) / params.zeta)
            lower, upper = lower or lo, upper or hi
            t = self.utility(params, x, theta, loss, risk)
            contracts.append(Contract(x=x, t=t))
        menu = ContractMenu(
            low=contracts[0],
            high=contracts[1],
            regime=Regime.FIRST_BEST,
            risk_active=self.to_model_spec(params, risk).risk_active,
        )
        return ClosedFormSolution(
            menu=menu, lower_clamped=lower, upper_clamped=upper, implementable=True
        )

    def closed_form_second_best(
        self, params: DlcParams, risk: bool
    ) -> ClosedFormSolution:
        """No distortion at the top, the low allocation shaded by the rent term.

        t_L = U(x_L, θ_L) and t_H = t_L + U(x_H, θ_H) − U(x_L, θ_H).
        """
        params = _checked(params)
        p = params.prior_high
        if not 0.0 < p < 1.0:
            raise ArgumentError(f"second-best needs 0 < prior_high < 1, got {p}")
        m = params.m if risk else 0.0
        th_l, th_h = params.theta_low, params.theta_high
        l_l, l_h = params.loss_low, params.loss_high

        raw_high = (th_h + m * l_h) / params.zeta
        raw_low = (m * l_l - p * m * l_h - p * th_h + th_l) / ((1 - p) * params.zeta)
        x_high, _, high_over = _clamp(raw_high)
        x_low, low_under, low_over = _clamp(raw_low)

        t_low = self.utility(params, x_low, th_l, l_l, risk)
        rent = self.utility(params, x_low, th_h, l_h, risk) - t_low
        t_high = self.utility(params, x_high, th_h, l_h, risk) - rent
        menu = ContractMenu(
            low=Contract(x=x_low, t=t_low),
            high=Contract(x=x_high, t=t_high),
            regime=Regime.SECOND_BEST,
            risk_active=self.to_model_spec(params, risk).risk_active,
        )
        return ClosedFormSolution(
            menu=menu,
            lower_clamped=low_under,
            upper_clamped=high_over or low_over,
            implementable=rent >= 0.0,
        )

    @staticmethod
    def critical_probabilities(params: DlcParams) -> Thresholds:
        """p̄ = ℓ_L/ℓ_H, p̂* = θ_L/θ_H, p* = (θ_L + mℓ_L)/(θ_H + mℓ_H)."""
        params = _checked(params)
        p_bar = params.loss_low / params.loss_high if params.loss_high > 0 else None
        m = params.m
        return Thresholds(
            p_bar=p_bar,
            p_star_norisk=params.theta_low / params.theta_high,
            p_star_risk=(params.theta_low + m * params.loss_low)
            / (params.theta_high + m * params.loss_high),
        )


dlc_service = DlcService()
