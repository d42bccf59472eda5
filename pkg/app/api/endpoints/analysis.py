from fastapi import APIRouter, Depends
from fastapi.responses import PlainTextResponse

from app.models.schemas.analysis import ComparisonReport, Thresholds
from app.models.schemas.api import (
    CompareRequest,
    ModelRequest,
    SweepRequest,
    SweepResponse,
)
from app.models.schemas.run_config import GridSpec
from app.services import export_service
from app.services.risk_analysis_service import (
    RiskAnalysisService,
    get_risk_analysis_service,
)

router = APIRouter()


@router.post("/compare", response_model=ComparisonReport)
def compare(
    request: CompareRequest,
    analysis: RiskAnalysisService = Depends(get_risk_analysis_service),
):
    """
    Compare second-best menus with and without breach risk.

    - **spec**: problem instance with a breach-risk section
    - **oracle**: also certify both menus against the brute-force solver
    - **oracle_steps**: oracle grid points per axis
    """
    return analysis.compare(
        request.spec.to_model_spec(),
        certify=request.oracle,
        oracle_steps=request.oracle_steps,
    )


@router.post("/thresholds", response_model=Thresholds)
def thresholds(
    request: ModelRequest,
    analysis: RiskAnalysisService = Depends(get_risk_analysis_service),
):
    """Critical priors p_bar, p_star_norisk and p_star_risk."""
    return analysis.thresholds(request.spec.to_model_spec())


@router.post("/sweep", response_model=SweepResponse)
def sweep(
    request: SweepRequest,
    analysis: RiskAnalysisService = Depends(get_risk_analysis_service),
):
    """
    Solve every regime and risk mode over a grid of priors.

    - **grid**: "p_min,p_max,n"
    - **format**: "json" for rows, "csv" for the CSV file body
    """
    grid = GridSpec.parse(request.grid)
    table = analysis.sweep_p(request.spec.to_model_spec(), grid.points(), jobs=1)
    if request.format == "csv":
        return PlainTextResponse(
            export_service.render_csv(table), media_type="text/csv"
        )
    return SweepResponse(rows=table.rows())
