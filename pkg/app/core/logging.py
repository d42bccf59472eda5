import sys

import logfire
from fastapi import FastAPI, Request, Response
from fastapi.routing import APIRoute
from starlette.middleware.base import BaseHTTPMiddleware

from app.core.config import settings
from app.core.exceptions import PrivacyContractsError


class LoggingMiddleware(BaseHTTPMiddleware):
    async def dispatch(self, request: Request, call_next):
        response = await call_next(request)

        # Skip logging for health check endpoints
        if request.url.path == "/health":
            return response

        logfire.info(
            "HTTP Request",
            method=request.method,
            path=request.url.path,
            status_code=response.status_code,
            client_host=request.client.host if request.client else None,
        )

        return response


class LoggingRoute(APIRoute):
    def get_route_handler(self):
        original_route_handler = super().get_route_handler()

        async def custom_route_handler(request: Request) -> Response:
            try:
                return await original_route_handler(request)
            except PrivacyContractsError:
                # Mapped to a response by the exception handlers in app.main
                raise
            except Exception as exc:
                logfire.exception(
                    "Unhandled exception",
                    method=request.method,
                    path=request.url.path,
                    exception=str(exc),
                )
                raise

        return custom_route_handler


def setup_logging(verbose: bool = False) -> None:
    """Configure Logfire for structured logging.

    Console output goes to stderr so that reports and CSV written to stdout
    stay machine readable. Nothing is sent to Logfire without a token.
    """
    console = (
        logfire.ConsoleOptions(min_log_level="debug", output=sys.stderr)
        if verbose
        else False
    )
    logfire.configure(
        send_to_logfire="if-token-present",
        token=settings.LOGFIRE_TOKEN,
        service_name="privacy-contracts",
        service_version=settings.VERSION,
        environment=settings.ENVIRONMENT,
        console=console,
    )


def setup_app_logging(app: FastAPI) -> None:
    """Set up logging for the FastAPI application."""
    setup_logging(verbose=settings.ENVIRONMENT == "development")

    app.add_middleware(LoggingMiddleware)

    # Use custom route class for exception logging
    app.router.route_class = LoggingRoute
