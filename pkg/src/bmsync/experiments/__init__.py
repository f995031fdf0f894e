"""
蒙特卡洛实验：网格展开、单次试验管道、可续跑扫描与结果输出
"""
from .grid import cell_key, cell_params, cell_seed, expand_grid, trial_seed
from .report import (
    SweepResult,
    VerifyReport,
    emit_csv,
    emit_summary,
    read_csv,
    records_frame,
    verify,
    wilson_interval,
)
from .stages import (
    AdversaryStage,
    BaseStage,
    CertifyStage,
    ConditionStage,
    GenerateStage,
    Pipeline,
    RecoveryStage,
    SolveStage,
    StageMetrics,
    StageType,
    TrialContext,
    build_pipeline,
)
from .sweep import Checkpoint, run_sweep, spec_fingerprint
from .trial import artifact_paths, execute_trial, run_trial

__all__ = [
    "cell_key",
    "cell_params",
    "cell_seed",
    "expand_grid",
    "trial_seed",
    "SweepResult",
    "VerifyReport",
    "emit_csv",
    "emit_summary",
    "read_csv",
    "records_frame",
    "verify",
    "wilson_interval",
    "AdversaryStage",
    "BaseStage",
    "CertifyStage",
    "ConditionStage",
    "GenerateStage",
    "Pipeline",
    "RecoveryStage",
    "SolveStage",
    "StageMetrics",
    "StageType",
    "TrialContext",
    "build_pipeline",
    "Checkpoint",
    "run_sweep",
    "spec_fingerprint",
    "artifact_paths",
    "execute_trial",
    "run_trial",
]
