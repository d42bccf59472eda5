import logfire
from fastapi import APIRouter, Depends

from app.models.domain import NoRisk
from app.models.schemas.api import (
    ModelRequest,
    RiskModeReports,
    SolveResponse,
    VerifyRequest,
    VerifyResponse,
)
from app.services.screening_service import ScreeningService, get_screening_service

router = APIRouter()


@router.post("/solve", response_model=SolveResponse)
def solve(
    request: ModelRequest,
    screening: ScreeningService = Depends(get_screening_service),
):
    """
    Solve first-best and second-best menus.

    - **spec**: problem instance; with a breach-risk section the menus are
      reported with the risk stripped and kept
    - second-best is left out when prior_high is 0 or 1
    """
    spec = request.spec.to_model_spec()
    modes = [("off", spec.without_risk())]
    if not isinstance(spec.risk, NoRisk):
        modes.append(("on", spec))

    reports = []
    for risk, instance in modes:
        second_best = None
        if 0.0 < instance.prior_high < 1.0:
            second_best = screening.solve_second_best(instance)
        reports.append(
            RiskModeReports(
                risk=risk,
                first_best=screening.solve_first_best(instance),
                second_best=second_best,
            )
        )
    logfire.info("Solved menus", modes=len(reports), p=spec.prior_high)
    return SolveResponse(reports=reports)


@router.post("/verify", response_model=VerifyResponse)
def verify(
    request: VerifyRequest,
    screening: ScreeningService = Depends(get_screening_service),
):
    """
    Check a menu against both incentive and both participation constraints.

    - **spec**: problem instance
    - **menu**: x_low, t_low, x_high, t_high
    """
    spec = request.spec.to_model_spec()
    residuals = screening.verify_menu(spec, request.menu.to_menu(spec.risk_active))
    feasible = residuals.feasible(screening.tolerances.feas_tol)
    return VerifyResponse(
        message=None if feasible else "menu violates a constraint",
        residuals=residuals,
        feasible=feasible,
        binding=screening.binding_pattern(residuals),
    )
