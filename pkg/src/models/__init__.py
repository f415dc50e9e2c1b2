from .data_models import (
    OperatorKind,
    ScanMode,
    BoundaryCondition,
    LinkAssignment,
    OutputFormat,
    LawViolation,
    GroupFile,
    CochainFile,
    CocycleCheckResult,
    ClassVerdict,
    TripleDiagnostic,
    IndexReport,
    CheckResult,
    SuiteReport,
    PatchRunConfig,
    RunConfig,
    OracleReport,
)
from .errors import ErrorKind, SptIndexError, InputError, MathematicalFailure

__all__ = [
    "OperatorKind",
    "ScanMode",
    "BoundaryCondition",
    "LinkAssignment",
    "OutputFormat",
    "LawViolation",
    "GroupFile",
    "CochainFile",
    "CocycleCheckResult",
    "ClassVerdict",
    "TripleDiagnostic",
    "IndexReport",
    "CheckResult",
    "SuiteReport",
    "PatchRunConfig",
    "RunConfig",
    "OracleReport",
    "ErrorKind",
    "SptIndexError",
    "InputError",
    "MathematicalFailure",
]
