"""
结构化报告：求解结果、证书、恢复判定、条件评估与试验记录
"""
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from ..errors import InvariantViolationError
from .models import FactorPoint, SignVector

# 精确恢复判定的相对 Frobenius 容差
EXACT_RECOVERY_TOL = 1e-6


class SolveStatus(str, Enum):
    """求解终止状态"""
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    ESCAPE_EXHAUSTED = "escape_exhausted"


class TraceEvent(str, Enum):
    STEP = "step"
    ESCAPE = "escape"
    CONVERGED = "converged"


@dataclass(frozen=True)
class TraceEntry:
    """单次迭代日志"""
    iteration: int
    objective: float
    grad_norm: float
    step: float
    event: TraceEvent = TraceEvent.STEP

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["event"] = self.event.value
        return data


@dataclass(frozen=True)
class SolveResult:
    """黎曼梯度上升的返回值"""
    point: FactorPoint
    status: SolveStatus
    iterations: int
    grad_residual: float
    min_curvature_estimate: float
    objective_value: float
    c_opnorm: float
    escapes: int = 0
    seed: Optional[int] = None
    trace: Optional[List[TraceEntry]] = None

    @property
    def converged(self) -> bool:
        return self.status == SolveStatus.CONVERGED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "grad_residual": self.grad_residual,
            "min_curvature_estimate": self.min_curvature_estimate,
            "objective_value": self.objective_value,
            "c_opnorm": self.c_opnorm,
            "escapes": self.escapes,
            "seed": self.seed,
            "n": self.point.n,
            "r": self.point.r,
            "trace": [t.to_dict() for t in self.trace] if self.trace is not None else None,
        }


@dataclass(frozen=True)
class CriticalityReport:
    """一阶/二阶临界性与全局最优性证书"""
    grad_residual: float
    s_min_eig: float
    s_y_residual: float
    is_first_order: bool
    is_second_order: bool
    is_global: bool
    tolerance: float
    c_opnorm: float

    def __post_init__(self):
        if self.is_global and not self.is_first_order:
            raise InvariantViolationError("a global certificate requires first-order criticality",
                                          field="is_global")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class RecoveryReport:
    """精确恢复判定 Y = z uᵀ"""
    labels: SignVector
    is_exact: bool
    residual: float
    rank1_gap: float
    leading_singular: float
    correlation: Optional[float] = None

    def __post_init__(self):
        # σ₂ ≤ ‖Y - z u*ᵀ‖_F 与 σ₁ ≈ ‖Y‖_F 之间留浮点余量
        if self.is_exact and self.rank1_gap > EXACT_RECOVERY_TOL * self.leading_singular * (1 + 1e-9):
            raise InvariantViolationError("exact recovery with a non-negligible second singular value",
                                          field="rank1_gap")
        if self.correlation is not None and not 0.0 <= self.correlation <= 1.0:
            raise InvariantViolationError(f"correlation {self.correlation} outside [0, 1]",
                                          field="correlation")

    @property
    def relative_gap(self) -> float:
        return self.rank1_gap / self.leading_singular if self.leading_singular > 0 else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "labels": [int(v) for v in self.labels.entries],
            "is_exact": self.is_exact,
            "residual": self.residual,
            "rank1_gap": self.rank1_gap,
            "leading_singular": self.leading_singular,
            "correlation": self.correlation,
        }


def _check_margin(satisfied: bool, margin: float) -> None:
    if satisfied != (margin >= 0):
        raise InvariantViolationError(f"satisfied={satisfied} inconsistent with margin={margin}",
                                      field="margin")


@dataclass(frozen=True)
class Z2DetermReport:
    """确定性 Z2 同步条件 ρ^Δ + (r+11)/(r-3)‖Δ‖ ≤ (r-3)/(r-1) λ₂"""
    lambda2: float
    rho_delta: float
    delta_opnorm: float
    lhs: float
    rhs: float
    satisfied: bool
    margin: float
    r: int
    proof_margin: Optional[float] = None

    def __post_init__(self):
        _check_margin(self.satisfied, self.margin)
        if self.lambda2 < 0:
            raise InvariantViolationError(f"lambda2 must be nonnegative, got {self.lambda2}",
                                          field="lambda2")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SbmDetermReport:
    """确定性 SBM 条件 d^z_min ≥ ..."""
    dz_min: float
    a_centered_opnorm: float
    lhs: float
    rhs: float
    satisfied: bool
    margin: float
    variant: str
    r: int
    estimated: bool = False

    def __post_init__(self):
        _check_margin(self.satisfied, self.margin)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ConditionReport:
    """与实例模型匹配的条件评估结果（统一视图）"""
    name: str
    lhs: float
    rhs: float
    margin: float
    satisfied: bool
    estimated: bool = False
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not math.isnan(self.margin):
            _check_margin(self.satisfied, self.margin)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class TrialRecord:
    """单次蒙特卡洛试验的记录；rank1_gap 为 σ₂/σ₁"""
    cell: Dict[str, Any]
    trial: int
    recovered: bool
    certified_global: bool
    objective: float
    grad_residual: float
    s_min_eig: float
    condition_margin: float
    rank1_gap: float
    correlation: float
    status: str
    wall_ms: float = 0.0

    def __post_init__(self):
        if self.recovered and self.rank1_gap > EXACT_RECOVERY_TOL * (1 + 1e-9):
            raise InvariantViolationError("recovered trial with rank1_gap above tolerance",
                                          field="rank1_gap")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
