"""
图与噪声的标量泛函：λ₂、ρ^Δ、‖·‖_op、d^z
"""
from typing import Tuple

import numpy as np

from ..core.models import Graph, NoiseMatrix, SignVector
from ..errors import DimensionMismatchError, InvalidParameterError, InvariantViolationError
from ..utils import spectral
from ..utils.validator import Validator, ensure


def _check_length(n: int, z: SignVector, what: str) -> None:
    if z.n != n:
        raise DimensionMismatchError(f"{what} is {n}×{n} but the sign vector has length {z.n}")


def algebraic_connectivity(G: Graph) -> float:
    """Laplacian 的第二小特征值（稠密分解）；舍入产生的负值截为 0"""
    if G.n < 2:
        return 0.0
    lam = spectral.smallest_eigenvalues(G.laplacian(), 2)[1]
    return max(float(lam), 0.0)


def rho_delta(delta: NoiseMatrix, z: SignVector) -> Tuple[float, np.ndarray]:
    """ρ_i = -z_i Σ_j Δ_ij z_j 及其最大值"""
    _check_length(delta.n, z, "noise")
    zf = z.as_float()
    per_row = -zf * (delta.entries @ zf)
    return (float(per_row.max()) if per_row.size else 0.0), per_row


def operator_norm(M: np.ndarray) -> float:
    """对称矩阵的谱范数"""
    M = np.asarray(M, dtype=np.float64)
    ensure(Validator.validate_square(M, "matrix"), InvalidParameterError, "matrix")
    ensure(Validator.validate_symmetric(M, "matrix", rtol=1e-12), InvariantViolationError, "matrix")
    return spectral.operator_norm(M)


def dz_min(A: Graph, z: SignVector) -> Tuple[float, np.ndarray]:
    """有符号度 d^z_i = z_i Σ_j A_ij z_j（同簇邻居数减异簇邻居数）及其最小值"""
    _check_length(A.n, z, "graph")
    zf = z.as_float()
    per_vertex = zf * (A.weights @ zf)
    return (float(per_vertex.min()) if per_vertex.size else 0.0), per_vertex


def local_stability(G: Graph, delta: NoiseMatrix, z: SignVector) -> np.ndarray:
    """
    逐顶点判定 d_i > ρ_i

    C = diag(z) A diag(z) + Δ 时，翻转 z_i 使 ⟨C, zzᵀ⟩ 严格下降当且仅当该式成立。
    """
    _check_length(G.n, z, "graph")
    _, rho = rho_delta(delta, z)
    return G.degrees() > rho


def sbm_local_stability(A: Graph, z: SignVector, alpha: float) -> np.ndarray:
    """C = A - α11ᵀ 时的逐顶点稳定性指标 d^z_i + 2α > 0"""
    _, dz = dz_min(A, z)
    return dz + 2.0 * alpha > 0


def concentration_ratio(X: np.ndarray, v: float) -> float:
    """‖X‖ / √(n v)，仅作诊断，不作判定"""
    X = np.asarray(X, dtype=np.float64)
    if v <= 0:
        raise InvalidParameterError(f"variance proxy must be positive, got {v}", field="v")
    return operator_norm(X) / float(np.sqrt(X.shape[0] * v))
