"""
标签提取与精确恢复判定
"""
import numpy as np

from ..core.models import FactorPoint, SignVector
from ..core.reports import EXACT_RECOVERY_TOL, RecoveryReport
from ..errors import DimensionMismatchError
from ..utils.rng import make_rng

# 最大奇异值相对差低于该值视为重根
SINGULAR_TIE_RTOL = 1e-12


def _leading_direction(Y: np.ndarray) -> np.ndarray:
    """最大奇异值对应的左奇异向量；重根时取固定种子的随机组合"""
    U, s, _ = np.linalg.svd(Y, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.ones(Y.shape[0])
    tied = int(np.sum(s >= s[0] * (1.0 - SINGULAR_TIE_RTOL)))
    if tied == 1:
        return U[:, 0]
    weights = make_rng(0, "label_tiebreak").standard_normal(tied)
    return U[:, :tied] @ weights


def extract_labels(Y: FactorPoint) -> SignVector:
    """
    主左奇异向量的符号

    全局符号取使第一个非零分量为正；零分量记为 +1。
    """
    u = _leading_direction(Y.Y)
    nonzero = np.flatnonzero(u)
    if nonzero.size and u[nonzero[0]] < 0:
        u = -u
    labels = np.where(u < 0, -1, 1).astype(np.int8)
    return SignVector(labels)


def correlation(labels: SignVector, truth: SignVector) -> float:
    """|⟨labels, truth⟩| / n"""
    if labels.n != truth.n:
        raise DimensionMismatchError(f"labels have length {labels.n}, truth {truth.n}")
    dot = int(np.dot(labels.entries.astype(np.int64), truth.entries.astype(np.int64)))
    return abs(dot) / labels.n


def check_exact_recovery(Y: FactorPoint, z: SignVector,
                         tol: float = EXACT_RECOVERY_TOL) -> RecoveryReport:
    """
    u* = Yᵀz / n，‖Y - z u*ᵀ‖_F ≤ tol·‖Y‖_F 时判为精确恢复

    对 Y 右乘任意正交矩阵不变；z 与 -z 等价。
    """
    if Y.n != z.n:
        raise DimensionMismatchError(f"Y has {Y.n} rows but truth has length {z.n}")
    zf = z.as_float()
    u_star = Y.Y.T @ zf / Y.n
    residual = float(np.linalg.norm(Y.Y - np.outer(zf, u_star)))
    singular = np.linalg.svd(Y.Y, compute_uv=False)
    leading = float(singular[0]) if singular.size else 0.0
    gap = float(singular[1]) if singular.size > 1 else 0.0

    labels = extract_labels(Y)
    return RecoveryReport(
        labels=labels,
        is_exact=residual <= tol * float(np.linalg.norm(Y.Y)),
        residual=residual,
        rank1_gap=gap,
        leading_singular=leading,
        correlation=correlation(labels, z),
    )

