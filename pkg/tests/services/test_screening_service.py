"""
Test first-best and second-best menu design.
"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.exceptions import ArgumentError, DomainError, SpecValidationError
from app.models.schemas.contract import Contract, ContractMenu, ReductionKind, Regime
from app.models.schemas.dlc import DlcParams
from app.models.schemas.optimization import BoundaryFlag
from app.services.dlc_service import DlcService
from app.services.screening_service import ScreeningService
from tests.strategies import dlc_params


def test_first_best_without_risk(screening_service, plain_spec):
    report = screening_service.solve_first_best(plain_spec)
    menu = report.menu
    assert menu.regime is Regime.FIRST_BEST
    assert menu.low.x == pytest.approx(1 / 3, abs=1e-8)
    assert menu.high.x == pytest.approx(2 / 3, abs=1e-8)
    assert menu.low.t == pytest.approx(1 / 3, abs=1e-8)
    assert menu.high.t == pytest.approx(4 / 3, abs=1e-8)
    assert report.information_rent == pytest.approx(0.0, abs=1e-12)
    assert report.reduction is None
    assert report.boundary_low is BoundaryFlag.INTERIOR


def test_first_best_with_risk(screening_service, risk_spec):
    """x† = (θ + mℓ)/ζ, charged at the full effective utility."""
    menu = screening_service.solve_first_best(risk_spec).menu
    assert menu.risk_active
    assert menu.low.x == pytest.approx(1.1 / 3, abs=1e-8)
    assert menu.high.x == pytest.approx(2.3 / 3, abs=1e-8)
    assert menu.low.t == pytest.approx(0.303333333, abs=1e-8)
    assert menu.high.t == pytest.approx(1.463333333, abs=1e-8)


def test_second_best_without_risk(screening_service, plain_spec):
    report = screening_service.solve_second_best(plain_spec)
    menu = report.menu
    assert menu.regime is Regime.SECOND_BEST
    assert report.reduction is ReductionKind.IR_LOW_IC_HIGH
    assert menu.low.x == pytest.approx(2 / 9, abs=1e-8)
    assert menu.high.x == pytest.approx(2 / 3, abs=1e-8)
    assert menu.low.t == pytest.approx(2 / 9, abs=1e-8)
    assert menu.high.t == pytest.approx(10 / 9, abs=1e-8)
    assert report.profit == pytest.approx(2 / 9, abs=1e-8)
    assert report.information_rent == pytest.approx(2 / 9, abs=1e-8)
    assert report.feasible
    assert report.binding[:2] == ["ir_low", "ic_high"]


def test_second_best_with_risk(screening_service, risk_spec):
    report = screening_service.solve_second_best(risk_spec)
    menu = report.menu
    assert report.reduction is ReductionKind.IR_LOW_IC_HIGH
    assert menu.low.x == pytest.approx(0.233333333, abs=1e-8)
    assert menu.high.x == pytest.approx(0.766666667, abs=1e-8)
    assert menu.low.t == pytest.approx(0.156666667, abs=1e-8)
    assert report.information_rent == pytest.approx(0.08, abs=1e-8)
    assert "ir_low" in report.binding
    assert "ic_high" in report.binding


@pytest.mark.parametrize("p", [0.75, 0.9])
def test_low_type_excluded_at_high_priors(screening_service, plain_spec, p):
    report = screening_service.solve_second_best(plain_spec.with_prior(p))
    assert report.menu.low.x == 0.0
    assert report.boundary_low is BoundaryFlag.LOWER
    assert report.information_rent == pytest.approx(0.0, abs=1e-12)
    assert report.menu.high.t == pytest.approx(4 / 3, abs=1e-8)


def test_participation_guard_under_risk(screening_service, risk_spec):
    """At p = 0.5 the reduced menu would leave the high type below zero."""
    report = screening_service.solve_second_best(risk_spec.with_prior(0.5))
    assert report.reduction is ReductionKind.PARTICIPATION_GUARDED
    assert report.menu.low.x == pytest.approx(1 / 6, abs=1e-8)
    assert report.menu.low.t == pytest.approx(1 / 12, abs=1e-8)
    assert report.feasible
    assert report.information_rent >= 0.0
    assert "ir_high" in report.binding


@pytest.mark.parametrize("p", [0.0, 1.0, -0.2])
def test_second_best_rejects_degenerate_priors(screening_service, plain_spec, p):
    with pytest.raises(ArgumentError):
        screening_service.solve_second_best(plain_spec.with_prior(p))


def test_invalid_spec_is_rejected(screening_service, plain_spec):
    types = plain_spec.types.model_copy(update={"theta_low": 2.0, "theta_high": 1.0})
    spec = plain_spec.model_copy(update={"types": types})
    with pytest.raises(SpecValidationError) as exc_info:
        screening_service.solve_first_best(spec)
    assert exc_info.value.report.violations[0].assumption == "TypePair"


def test_losses_that_sink_the_high_type_are_rejected(screening_service, dlc_service):
    """U(x_H†, θ_H) < U(x_H†, θ_L): no two-type menu is feasible at x_H†."""
    params = DlcParams(
        theta_low=1.0,
        theta_high=1.1,
        zeta=10.0,
        m=1.0,
        loss_low=0.0,
        loss_high=1.0,
        prior_high=0.3,
    )
    spec = dlc_service.to_model_spec(params, risk=True)
    with pytest.raises(SpecValidationError):
        screening_service.solve_second_best(spec)
    with pytest.raises(SpecValidationError):
        screening_service.solve_first_best(spec)
    assert screening_service.solve_second_best(spec.without_risk()).feasible


@pytest.mark.parametrize("update", [{"m": 0.0}, {"loss_low": 0.0, "loss_high": 0.0}])
def test_breach_risk_without_effect_matches_no_risk(
    screening_service, dlc_service, dlc_params, update
):
    params = dlc_params.model_copy(update=update)
    inert = dlc_service.to_model_spec(params, risk=True)
    plain = dlc_service.to_model_spec(params, risk=False)
    service = screening_service
    for solve in (service.solve_first_best, service.solve_second_best):
        assert solve(inert) == solve(plain)


def test_information_rent_needs_second_best(screening_service, plain_spec):
    first = screening_service.solve_first_best(plain_spec)
    with pytest.raises(ArgumentError):
        screening_service.information_rent(plain_spec, first)
    second = screening_service.solve_second_best(plain_spec)
    rent = screening_service.information_rent(plain_spec, second)
    assert rent == pytest.approx(2 / 9, abs=1e-8)


def test_welfare_is_profit_plus_expected_rent(screening_service, risk_spec):
    for p in (0.25, 0.5, 0.75):
        spec = risk_spec.with_prior(p)
        report = screening_service.solve_second_best(spec)
        expected = report.profit + p * report.information_rent
        assert screening_service.welfare(spec, report) == pytest.approx(expected)
        assert report.welfare == pytest.approx(expected)


def test_verify_menu_residuals(screening_service, plain_spec):
    menu = ContractMenu(
        low=Contract(x=2 / 9, t=2 / 9),
        high=Contract(x=2 / 3, t=10 / 9),
        regime=Regime.SECOND_BEST,
        risk_active=False,
    )
    residuals = screening_service.verify_menu(plain_spec, menu)
    assert residuals.ir_low == pytest.approx(0.0, abs=1e-12)
    assert residuals.ic_high == pytest.approx(0.0, abs=1e-12)
    assert residuals.ir_high == pytest.approx(2 / 9)
    assert residuals.ic_low == pytest.approx(4 / 9)
    assert screening_service.binding_pattern(residuals) == ["ir_low", "ic_high"]


def test_verify_menu_outside_interval(screening_service, plain_spec):
    menu = ContractMenu(
        low=Contract(x=0.2, t=0.1),
        high=Contract(x=1.5, t=1.0),
        regime=Regime.SECOND_BEST,
        risk_active=False,
    )
    with pytest.raises(DomainError):
        screening_service.verify_menu(plain_spec, menu)


def test_evaluate_menu_flags_bounds(screening_service, plain_spec):
    menu = ContractMenu(
        low=Contract(x=0.0, t=0.0),
        high=Contract(x=1.0, t=1.0),
        regime=Regime.SECOND_BEST,
        risk_active=False,
    )
    report = screening_service.evaluate_menu(plain_spec, menu)
    assert report.boundary_low is BoundaryFlag.LOWER
    assert report.boundary_high is BoundaryFlag.UPPER
    assert report.feasible


@pytest.mark.slow
@settings(max_examples=500, deadline=None)
@given(params=dlc_params(), risk=st.booleans())
def test_second_best_invariants(params, risk):
    service = ScreeningService()
    spec = DlcService().to_model_spec(params, risk=risk)
    first = service.solve_first_best(spec)
    second = service.solve_second_best(spec)
    # no distortion at the top
    assert abs(second.menu.high.x - first.menu.high.x) <= 2e-10
    assert second.feasible
    assert second.menu.low.x <= second.menu.high.x + 1e-10
    assert second.menu.low.x <= first.menu.low.x + 1e-8
