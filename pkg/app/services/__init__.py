from app.services.config_service import ConfigService, config_service
from app.services.dlc_service import DlcService, dlc_service
from app.services.model_service import ModelService, get_model_service, model_service
from app.services.optimizer_service import maximize_concave
from app.services.oracle_service import OracleService, oracle_service
from app.services.risk_analysis_service import (
    RiskAnalysisService,
    get_risk_analysis_service,
    risk_analysis_service,
)
from app.services.screening_service import (
    ScreeningService,
    get_screening_service,
    screening_service,
)

# Export all services
__all__ = [
    "ConfigService",
    "config_service",
    "DlcService",
    "dlc_service",
    "ModelService",
    "model_service",
    "get_model_service",
    "maximize_concave",
    "OracleService",
    "oracle_service",
    "RiskAnalysisService",
    "risk_analysis_service",
    "get_risk_analysis_service",
    "ScreeningService",
    "screening_service",
    "get_screening_service",
]
