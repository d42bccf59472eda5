from enum import Enum

from pydantic import BaseModel, ConfigDict


class DomainModel(BaseModel):
    """Base class for all model families.

    Instances are immutable once built so one spec can be shared by any
    number of concurrent solves.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class TypeSelector(str, Enum):
    """Which of the two consumer types an evaluation refers to."""

    LOW = "low"
    HIGH = "high"
