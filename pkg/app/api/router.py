from fastapi import APIRouter

from app.api.endpoints import analysis, contracts, models
from app.core.logging import LoggingRoute

# Create API router
api_router = APIRouter(route_class=LoggingRoute)

# Include all endpoint routers
api_router.include_router(contracts.router, tags=["contracts"])
api_router.include_router(analysis.router, tags=["analysis"])
api_router.include_router(models.router, prefix="/models", tags=["models"])
