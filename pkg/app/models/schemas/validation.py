from typing import List, Optional

from pydantic import computed_field

from app.models.schemas.base import BaseSchema


class Violation(BaseSchema):
    """One failed assumption, with the x that witnesses it when there is one."""

    assumption: str
    message: str
    witness_x: Optional[float] = None


class ValidationReport(BaseSchema):
    """Outcome of checking a spec against the modelling assumptions.

    Advisories describe properties the solvers can live without; they never
    make a spec invalid.
    """

    violations: List[Violation] = []
    advisories: List[Violation] = []
    grid_points: int

    @computed_field
    @property
    def valid(self) -> bool:
        return not self.violations
