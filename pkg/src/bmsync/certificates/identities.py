"""
证明中用到的矩阵恒等式，作为数值检验的 oracle

Q_ij = ¼‖Y_i - Y_j‖⁴，W = Y - 1uᵀ（u 为 Y 的列均值）：
    Q = a1ᵀ + 1aᵀ + Q̃，a_i = ¼‖W_i‖⁴，‖Q̃‖_* ≤ 14‖W‖_F²
随机切方向 Ẏ_i = Γ - ⟨Γ, Y_i⟩Y_i（Γ 为标准高斯行向量）：
    E ẎẎᵀ = (r-3)11ᵀ + 2YYᵀ + Q
"""
from typing import Tuple

import numpy as np

from ..core.models import FactorPoint
from ..errors import DimensionMismatchError, InvalidParameterError
from ..manifold.oblique import row_dot
from ..utils.rng import make_rng

# Q̃ 核范数界的常数
Q_TILDE_CONSTANT = 14.0
_MC_CHUNK = 8192


def centered_part(Y: FactorPoint) -> np.ndarray:
    """W = Y - 1uᵀ，Wᵀ1 = 0"""
    return Y.Y - Y.Y.mean(axis=0, keepdims=True)


def q_decompose(Y: FactorPoint) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """返回 (Q, a, Q̃)"""
    W = centered_part(Y)
    sq_norms = row_dot(W, W)
    dist2 = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (W @ W.T)
    np.maximum(dist2, 0.0, out=dist2)
    Q = 0.25 * dist2 ** 2
    np.fill_diagonal(Q, 0.0)
    a = 0.25 * sq_norms ** 2
    Q_tilde = Q - a[:, None] - a[None, :]
    return Q, a, Q_tilde


def q_tilde_bound(Y: FactorPoint) -> Tuple[float, float]:
    """(‖Q̃‖_*, 14‖W‖_F²)"""
    _, _, Q_tilde = q_decompose(Y)
    nuclear = float(np.sum(np.linalg.svd(Q_tilde, compute_uv=False)))
    W = centered_part(Y)
    return nuclear, Q_TILDE_CONSTANT * float(np.sum(W * W))


def _check_rank(Y: FactorPoint, r: int) -> None:
    if r != Y.r:
        raise DimensionMismatchError(f"direction dimension r={r} does not match Y with {Y.r} columns")


def expected_direction_matrix(Y: FactorPoint, r: int) -> np.ndarray:
    """(r-3)11ᵀ + 2YYᵀ + Q，逐元素等于 r - 2 + ⟨Y_i, Y_j⟩²"""
    _check_rank(Y, r)
    Q, _, _ = q_decompose(Y)
    return (r - 3.0) + 2.0 * Y.gram() + Q


def monte_carlo_direction_matrix(Y: FactorPoint, r: int, samples: int, seed: int) -> np.ndarray:
    """
    E ẎẎᵀ 的抽样估计

    ⟨Ẏ_i, Ẏ_j⟩ = ‖Γ‖² - a_i² - a_j² + a_i a_j ⟨Y_i, Y_j⟩，a = YΓ。
    """
    _check_rank(Y, r)
    if samples < 1:
        raise InvalidParameterError(f"samples must be positive, got {samples}", field="samples")
    rng = make_rng(seed, "directions")
    n = Y.n
    norm_sum = 0.0
    sq_sum = np.zeros(n)
    cross = np.zeros((n, n))
    remaining = samples
    while remaining:
        k = min(remaining, _MC_CHUNK)
        gamma = rng.standard_normal((k, r))
        A = gamma @ Y.Y.T
        norm_sum += float(np.sum(gamma * gamma))
        sq_sum += np.sum(A * A, axis=0)
        cross += A.T @ A
        remaining -= k
    mean_sq = sq_sum / samples
    return norm_sum / samples - mean_sq[:, None] - mean_sq[None, :] + (cross / samples) * Y.gram()
