"""
Test thresholds, orderings and prior sweeps.
"""
from collections import Counter

import pytest
from hypothesis import given, settings

from app.core.exceptions import ArgumentError
from app.models.domain import LinearBreachRisk
from app.models.schemas.analysis import Verdict
from app.models.schemas.dlc import DlcParams
from app.models.schemas.run_config import GridSpec
from app.services.dlc_service import DlcService
from app.services.risk_analysis_service import GUARDED_REASON, RiskAnalysisService
from tests.strategies import comparison_sample, dlc_params, risk_dominant_window


def checks_for(report, proposition):
    return [o for o in report.orderings if o.proposition == proposition]


def test_thresholds_reference(analysis_service, risk_spec):
    thresholds = analysis_service.thresholds(risk_spec)
    assert thresholds.p_bar == pytest.approx(1 / 3)
    assert thresholds.p_star_norisk == pytest.approx(0.5, abs=1e-7)
    assert thresholds.p_star_risk == pytest.approx(1.1 / 2.3, abs=1e-7)


def test_thresholds_without_risk(analysis_service, plain_spec):
    thresholds = analysis_service.thresholds(plain_spec)
    assert thresholds.p_bar is None
    assert thresholds.p_star_risk == thresholds.p_star_norisk


@settings(max_examples=100, deadline=None)
@given(params=dlc_params())
def test_thresholds_match_closed_forms(params):
    spec = DlcService().to_model_spec(params, risk=True)
    numeric = RiskAnalysisService().thresholds(spec)
    closed = DlcService.critical_probabilities(params)
    assert numeric.p_star_norisk == pytest.approx(closed.p_star_norisk, abs=1e-6)
    assert numeric.p_star_risk == pytest.approx(closed.p_star_risk, abs=1e-6)
    if closed.p_bar is None:
        assert numeric.p_bar is None
    else:
        assert numeric.p_bar == pytest.approx(closed.p_bar)


def test_compare_below_loss_ratio(analysis_service, risk_spec):
    report = analysis_service.compare(risk_spec)
    assert not report.failures()
    assert checks_for(report, "1")[0].verdict is Verdict.PASS
    prop2 = checks_for(report, "2")[0]
    assert prop2.verdict is Verdict.PASS
    assert prop2.inequality == "x_L* >= x_hat_L*"
    assert [o.verdict for o in checks_for(report, "3")] == [Verdict.PASS] * 2

    t_low, t_high = checks_for(report, "4")
    assert t_low.verdict is Verdict.PASS
    assert t_low.rhs == pytest.approx(0.1444444444)
    assert t_high.verdict is Verdict.SKIPPED
    assert checks_for(report, "5")[0].verdict is Verdict.SKIPPED


def test_compare_at_loss_ratio(analysis_service, risk_spec):
    report = analysis_service.compare(risk_spec.with_prior(1 / 3))
    prop2 = checks_for(report, "2")[0]
    assert "==" in prop2.inequality
    assert prop2.verdict is Verdict.PASS
    assert prop2.lhs == pytest.approx(1 / 6, abs=1e-8)
    assert all(o.reason == "p equals p_bar" for o in checks_for(report, "4"))


def test_compare_skips_guarded_orderings(analysis_service, risk_spec):
    report = analysis_service.compare(risk_spec.with_prior(0.5))
    assert checks_for(report, "1")[0].verdict is Verdict.PASS
    prop2 = checks_for(report, "2")[0]
    assert prop2.verdict is Verdict.SKIPPED
    assert prop2.reason == GUARDED_REASON
    assert not report.failures()


def test_compare_risk_dominant_regime(analysis_service, risk_spec):
    """ℓ = (0.1, 0.6) puts p = 0.25 above p̄ = 1/6."""
    spec = risk_spec.model_copy(
        update={"risk": LinearBreachRisk(m=0.5, loss_low=0.1, loss_high=0.6)}
    )
    report = analysis_service.compare(spec)
    assert report.thresholds.p_bar == pytest.approx(1 / 6)
    for proposition in ("1", "2", "3", "4", "5"):
        for check in checks_for(report, proposition):
            assert check.verdict is Verdict.PASS, check
    prop2 = checks_for(report, "2")[0]
    assert prop2.inequality == "x_L* <= x_hat_L*"
    t_low, t_high = checks_for(report, "4")
    assert t_low.lhs == pytest.approx(0.1716666667, abs=1e-8)
    assert t_high.lhs == pytest.approx(1.4494444444, abs=1e-8)
    prop5 = checks_for(report, "5")[0]
    assert prop5.rhs == pytest.approx(0.0138888889, abs=1e-8)


def test_compare_with_zero_losses(analysis_service, risk_spec):
    spec = risk_spec.model_copy(
        update={"risk": LinearBreachRisk(m=0.5, loss_low=0.0, loss_high=0.0)}
    )
    report = analysis_service.compare(spec)
    assert report.thresholds.p_bar is None
    for proposition in ("2", "4", "5"):
        checks = checks_for(report, proposition)
        assert all(o.verdict is Verdict.SKIPPED for o in checks)
    prop1 = checks_for(report, "1")[0]
    assert prop1.verdict is Verdict.PASS
    assert prop1.slack == pytest.approx(0.0, abs=1e-9)
    assert all(o.verdict is Verdict.PASS for o in checks_for(report, "3"))


def test_compare_needs_breach_risk(analysis_service, plain_spec):
    with pytest.raises(ArgumentError):
        analysis_service.compare(plain_spec)


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_compare_needs_interior_prior(analysis_service, risk_spec, p):
    with pytest.raises(ArgumentError):
        analysis_service.compare(risk_spec.with_prior(p))


def test_compare_with_certification(analysis_service, risk_spec):
    report = analysis_service.compare(risk_spec, certify=True, oracle_steps=401)
    assert [c.risk_active for c in report.certification] == [False, True]
    assert all(c.within_bound for c in report.certification)


@settings(max_examples=40, deadline=None)
@given(params=dlc_params())
def test_random_instances_keep_allocation_orderings(params):
    spec = DlcService().to_model_spec(params, risk=True)
    report = RiskAnalysisService().compare(spec)
    for check in report.failures():
        assert check.proposition == "4", check


@pytest.mark.slow
def test_ordering_statistics_on_random_instances():
    """Every ordering but Prop 4's price claim holds; Prop 4 is mostly tested."""
    service = RiskAnalysisService()
    sample = comparison_sample(500, seed=7)
    verdicts = Counter()
    for params in sample:
        report = service.compare(DlcService().to_model_spec(params, risk=True))
        for check in report.orderings:
            verdicts[check.proposition, check.verdict] += 1

    for proposition in ("1", "2", "3", "5"):
        assert verdicts[proposition, Verdict.FAIL] == 0
    price_checks = sum(n for (prop, _), n in verdicts.items() if prop == "4")
    assert price_checks == 2 * len(sample)
    assert verdicts["4", Verdict.SKIPPED] < 0.5 * price_checks
    # Prop 5 is only stated above p_bar; the window draws test it
    assert verdicts["5", Verdict.PASS] > 0


def test_risk_dominant_window_holds_up_in_the_solver():
    """Priors inside the window give an unguarded menu meeting the side condition."""
    window = risk_dominant_window(1.0, 2.0, 2.5, 0.5, 0.1, 0.6)
    assert window is not None
    lo, hi = window
    spec = DlcService().to_model_spec(
        DlcParams(
            theta_low=1.0,
            theta_high=2.0,
            zeta=2.5,
            m=0.5,
            loss_low=0.1,
            loss_high=0.6,
            prior_high=0.5 * (lo + hi),
        )
    )
    report = RiskAnalysisService().compare(spec)
    prop4 = checks_for(report, "4")
    assert [o.verdict is Verdict.SKIPPED for o in prop4] == [False, False]


def test_sweep_reference_grid(analysis_service, risk_spec):
    grid = GridSpec.parse("0.05,0.95,19").points()
    table = analysis_service.sweep_p(risk_spec, grid)
    assert len(table.entries) == 76
    assert [(r.regime, r.risk) for r in table.rows()[:4]] == [
        ("first_best", "off"),
        ("first_best", "on"),
        ("second_best", "off"),
        ("second_best", "on"),
    ]

    for risk in ("off", "on"):
        second = table.select("second_best", risk)
        first = table.select("first_best", risk)
        assert len(second) == 19
        x_high = {round(row.x_H, 8) for row in second}
        assert len(x_high) == 1
        for left, right in zip(second, second[1:]):
            assert right.x_L <= left.x_L + 1e-9
        for sb, fb in zip(second, first):
            assert sb.welfare <= fb.welfare + 1e-9

    for row in table.select("second_best", "off"):
        if row.p > 0.5:
            assert row.rent == pytest.approx(0.0, abs=1e-9)
            assert row.boundary_L == "lower"


def test_sweep_rejects_bad_grids(analysis_service, risk_spec):
    for grid in ([], [0.0, 0.5], [0.5, 0.4], [0.3, 0.3], [0.5, 1.0]):
        with pytest.raises(ArgumentError):
            analysis_service.sweep_p(risk_spec, grid)


def test_sweep_in_parallel_matches_sequential(analysis_service, risk_spec):
    grid = [0.2, 0.4, 0.6]
    sequential = analysis_service.sweep_p(risk_spec, grid, jobs=1)
    parallel = analysis_service.sweep_p(risk_spec, grid, jobs=2)
    assert parallel == sequential


def test_profit_decomposition(analysis_service, plain_spec):
    grid = [0.1 * k for k in range(1, 10)]
    terms = analysis_service.profit_decomposition(plain_spec, grid)
    assert len(terms) == 18
    plain = [t for t in terms if not t.risk_active]
    for left, right in zip(plain, plain[1:]):
        assert right.high_term >= left.high_term - 1e-12
        assert right.low_term <= left.low_term + 1e-12
    at_quarter = analysis_service.profit_decomposition(plain_spec, [0.25])[0]
    assert at_quarter.total == pytest.approx(2 / 9, abs=1e-8)


def test_sweep_rows_match_closed_forms(analysis_service, risk_spec, dlc_params):
    dlc = DlcService()
    grid = GridSpec.parse("0.05,0.95,19").points()
    table = analysis_service.sweep_p(risk_spec, grid)
    for row in table.select("second_best", "on") + table.select("second_best", "off"):
        params = dlc_params.model_copy(update={"prior_high": row.p})
        closed = dlc.closed_form_second_best(params, risk=row.risk == "on")
        if not closed.implementable:
            continue
        assert row.x_L == pytest.approx(closed.menu.low.x, abs=1e-6)
        assert row.x_H == pytest.approx(closed.menu.high.x, abs=1e-6)
        assert row.t_L == pytest.approx(closed.menu.low.t, abs=1e-6)
        assert row.t_H == pytest.approx(closed.menu.high.t, abs=1e-6)
