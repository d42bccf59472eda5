from app.models.schemas.analysis import (
    ComparisonReport,
    OrderingCheck,
    ProfitTerms,
    SweepEntry,
    SweepRow,
    SweepTable,
    Thresholds,
    Verdict,
)
from app.models.schemas.base import BaseAPIResponse, BaseSchema
from app.models.schemas.contract import (
    ConstraintResiduals,
    Contract,
    ContractMenu,
    ReductionKind,
    Regime,
    SolveReport,
)
from app.models.schemas.dlc import ClosedFormSolution, DlcParams
from app.models.schemas.optimization import BoundaryFlag, OptResult
from app.models.schemas.oracle import Certification, InnerOptimum, OracleResult
from app.models.schemas.run_config import (
    GridSpec,
    ModelConfig,
    RunConfig,
    SolverTolerances,
)
from app.models.schemas.validation import ValidationReport, Violation

# Export all schemas
__all__ = [
    "BaseSchema",
    "BaseAPIResponse",
    "BoundaryFlag",
    "OptResult",
    "Violation",
    "ValidationReport",
    "Regime",
    "ReductionKind",
    "Contract",
    "ContractMenu",
    "ConstraintResiduals",
    "SolveReport",
    "Thresholds",
    "Verdict",
    "OrderingCheck",
    "ComparisonReport",
    "ProfitTerms",
    "SweepEntry",
    "SweepRow",
    "SweepTable",
    "InnerOptimum",
    "OracleResult",
    "Certification",
    "DlcParams",
    "ClosedFormSolution",
    "SolverTolerances",
    "GridSpec",
    "ModelConfig",
    "RunConfig",
]
