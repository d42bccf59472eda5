"""
Pytest configuration file.
"""
import os

os.environ.setdefault("PRIVACY_CONTRACTS_ENVIRONMENT", "test")

from typing import AsyncGenerator  # noqa: E402

import logfire  # noqa: E402
import pytest  # noqa: E402
import pytest_asyncio  # noqa: E402
from httpx import ASGITransport, AsyncClient  # noqa: E402

# Keep test runs local and quiet
logfire.configure(send_to_logfire=False, console=False)

from app.main import app  # noqa: E402
from app.models.domain import ModelSpec  # noqa: E402
from app.models.schemas.dlc import DlcParams  # noqa: E402
from app.models.schemas.run_config import SolverTolerances  # noqa: E402
from app.services.dlc_service import DlcService  # noqa: E402
from app.services.model_service import ModelService  # noqa: E402
from app.services.oracle_service import OracleService  # noqa: E402
from app.services.risk_analysis_service import RiskAnalysisService  # noqa: E402
from app.services.screening_service import ScreeningService  # noqa: E402

REFERENCE_CONFIG = """
[types]
theta_low = 1.0
theta_high = 2.0
prior_high = 0.25

[interval]
x_min = 0.0
x_max = 1.0

[cost]
kind = "quadratic"
zeta = 3.0

[risk]
kind = "linear_breach"
m = 0.5
loss_low = 0.2
loss_high = 0.6
"""

NO_RISK_CONFIG = """
[types]
theta_low = 1.0
theta_high = 2.0
prior_high = 0.25

[interval]
x_min = 0.0
x_max = 1.0

[cost]
zeta = 3.0
"""


@pytest.fixture
def tolerances() -> SolverTolerances:
    return SolverTolerances()


@pytest.fixture
def dlc_params() -> DlcParams:
    """θ=(1,2), ζ=3, m=0.5, ℓ=(0.2,0.6), p=0.25."""
    return DlcParams(
        theta_low=1.0,
        theta_high=2.0,
        zeta=3.0,
        m=0.5,
        loss_low=0.2,
        loss_high=0.6,
        prior_high=0.25,
    )


@pytest.fixture
def dlc_service() -> DlcService:
    return DlcService()


@pytest.fixture
def risk_spec(dlc_params, dlc_service) -> ModelSpec:
    return dlc_service.to_model_spec(dlc_params, risk=True)


@pytest.fixture
def plain_spec(dlc_params, dlc_service) -> ModelSpec:
    return dlc_service.to_model_spec(dlc_params, risk=False)


@pytest.fixture
def model_service(tolerances) -> ModelService:
    return ModelService(tolerances)


@pytest.fixture
def screening_service(tolerances) -> ScreeningService:
    return ScreeningService(tolerances)


@pytest.fixture
def analysis_service(tolerances) -> RiskAnalysisService:
    return RiskAnalysisService(tolerances)


@pytest.fixture
def oracle_service(tolerances) -> OracleService:
    return OracleService(tolerances)


@pytest.fixture
def reference_config(tmp_path):
    """The risk reference instance written to a TOML file."""
    path = tmp_path / "dlc.toml"
    path.write_text(REFERENCE_CONFIG, encoding="utf-8")
    return path


@pytest.fixture
def no_risk_config(tmp_path):
    path = tmp_path / "dlc_norisk.toml"
    path.write_text(NO_RISK_CONFIG, encoding="utf-8")
    return path


@pytest_asyncio.fixture
async def client() -> AsyncGenerator:
    """Get a test client."""
    transport = ASGITransport(app=app)
    async with AsyncClient(transport=transport, base_url="http://test") as test_client:
        yield test_client
