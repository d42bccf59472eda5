from typing import List, Optional, Union

from pydantic import AnyHttpUrl, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    # Project info
    PROJECT_NAME: str = "Privacy Contracts"
    PROJECT_DESCRIPTION: str = (
        "Screening contract solver for privacy-differentiated utility service"
    )
    VERSION: str = "0.1.0"
    ENVIRONMENT: str = "development"

    # API settings
    API_V1_STR: str = "/api"

    # CORS settings
    BACKEND_CORS_ORIGINS: List[AnyHttpUrl] = []

    @field_validator("BACKEND_CORS_ORIGINS", mode="before")
    def assemble_cors_origins(cls, v: Union[str, List[str]]) -> Union[List[str], str]:
        """Validate CORS origins."""
        if isinstance(v, str) and not v.startswith("["):
            return [i.strip() for i in v.split(",")]
        elif isinstance(v, (list, str)):
            return v
        raise ValueError(v)

    # Solver defaults (overridable per run from the [run] config section)
    OPT_TOL: float = 1e-10
    FEAS_TOL: float = 1e-8
    ASSUMPTION_TOL: float = 1e-9
    VALIDATION_GRID: int = 257
    THRESHOLD_TOL: float = 1e-8
    THRESHOLD_MAX_ITER: int = 60

    # Oracle settings
    ORACLE_STEPS: int = 2001
    ORACLE_BLOCK_ROWS: int = 128

    # Sweep settings
    SWEEP_JOBS: int = 1

    # Logging settings
    LOGFIRE_TOKEN: Optional[str] = None

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="PRIVACY_CONTRACTS_",
        case_sensitive=True,
        extra="ignore",
    )


# Create settings instance
settings = Settings()
