from typing import Optional

from pydantic import BaseModel, ConfigDict


class BaseSchema(BaseModel):
    """Base schema for all result and report models."""

    model_config = ConfigDict(from_attributes=True, frozen=True)


class BaseAPIResponse(BaseModel):
    """Base API response model."""

    success: bool = True
    message: Optional[str] = None
