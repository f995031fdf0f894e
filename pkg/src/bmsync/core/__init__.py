from .models import (
    CertificateMatrix,
    CostMatrix,
    FactorPoint,
    Graph,
    NoiseMatrix,
    ProblemInstance,
    SignVector,
    TangentMatrix,
)
from .reports import (
    EXACT_RECOVERY_TOL,
    ConditionReport,
    CriticalityReport,
    RecoveryReport,
    SbmDetermReport,
    SolveResult,
    SolveStatus,
    TraceEntry,
    TraceEvent,
    TrialRecord,
    Z2DetermReport,
)

__all__ = [
    "CertificateMatrix",
    "CostMatrix",
    "FactorPoint",
    "Graph",
    "NoiseMatrix",
    "ProblemInstance",
    "SignVector",
    "TangentMatrix",
    "EXACT_RECOVERY_TOL",
    "ConditionReport",
    "CriticalityReport",
    "RecoveryReport",
    "SbmDetermReport",
    "SolveResult",
    "SolveStatus",
    "TraceEntry",
    "TraceEvent",
    "TrialRecord",
    "Z2DetermReport",
]
