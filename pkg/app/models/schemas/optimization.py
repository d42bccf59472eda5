from enum import Enum

from app.models.schemas.base import BaseSchema


class BoundaryFlag(str, Enum):
    """Where an optimum sits relative to the privacy interval."""

    INTERIOR = "interior"
    LOWER = "lower"
    UPPER = "upper"


class OptResult(BaseSchema):
    """Result of a one dimensional concave maximization."""

    argmax: float
    max_value: float
    at_boundary: BoundaryFlag
    iterations: int
    # |slope| at an interior optimum, 0 at a bound or without a slope
    residual: float
