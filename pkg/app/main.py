import logfire
from fastapi import FastAPI, Request, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.api.router import api_router
from app.core.config import settings
from app.core.exceptions import (
    ArgumentError,
    ConfigError,
    DomainError,
    InfeasibleMenuError,
    PrivacyContractsError,
    SpecValidationError,
    UnsupportedOperationError,
)
from app.core.logging import setup_app_logging

# Create FastAPI app
app = FastAPI(
    title=settings.PROJECT_NAME,
    description=settings.PROJECT_DESCRIPTION,
    version=settings.VERSION,
    openapi_url=f"{settings.API_V1_STR}/openapi.json",
    docs_url=f"{settings.API_V1_STR}/docs",
    redoc_url=f"{settings.API_V1_STR}/redoc",
)

setup_app_logging(app)

# Set up CORS
if settings.BACKEND_CORS_ORIGINS:
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[str(origin) for origin in settings.BACKEND_CORS_ORIGINS],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

# Include API router
app.include_router(api_router, prefix=settings.API_V1_STR)


def _error(status_code: int, exc: Exception, **extra) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={"success": False, "message": str(exc), **extra},
    )


@app.exception_handler(SpecValidationError)
async def spec_validation_handler(request: Request, exc: SpecValidationError):
    return _error(
        status.HTTP_422_UNPROCESSABLE_ENTITY,
        exc,
        violations=[v.model_dump() for v in exc.report.violations],
    )


@app.exception_handler(ArgumentError)
@app.exception_handler(DomainError)
@app.exception_handler(ConfigError)
@app.exception_handler(UnsupportedOperationError)
async def bad_request_handler(request: Request, exc: PrivacyContractsError):
    return _error(status.HTTP_400_BAD_REQUEST, exc)


@app.exception_handler(InfeasibleMenuError)
@app.exception_handler(PrivacyContractsError)
async def solver_error_handler(request: Request, exc: PrivacyContractsError):
    logfire.error("Solver failed", path=request.url.path, error=str(exc))
    return _error(status.HTTP_500_INTERNAL_SERVER_ERROR, exc)


@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "message": f"Welcome to {settings.PROJECT_NAME} API",
        "version": settings.VERSION,
        "docs": f"{settings.API_V1_STR}/docs",
    }


@app.get("/health")
async def health():
    """Health check endpoint."""
    return {"status": "ok"}
