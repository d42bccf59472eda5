from fastapi import APIRouter, Depends

from app.models.schemas.api import ModelRequest
from app.models.schemas.validation import ValidationReport
from app.services.model_service import ModelService, get_model_service

router = APIRouter()


@router.post("/validate", response_model=ValidationReport)
def validate_model(
    request: ModelRequest,
    model_service: ModelService = Depends(get_model_service),
):
    """
    Check a problem instance against the assumptions the solvers rely on.

    Violations make the solvers refuse the instance; advisories do not.
    """
    return model_service.validate(request.spec.to_model_spec())
