"""
对称矩阵特征值工具：小规模用稠密分解，大规模用 ARPACK Lanczos
"""
from typing import Callable, Tuple

import numpy as np
from scipy import linalg as sla
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .logger import get_logger
from .rng import make_rng

logger = get_logger(__name__)

# 低于该维度使用稠密特征分解
DENSE_LIMIT = 1024
LANCZOS_TOL = 1e-10


def _start_vector(n: int) -> np.ndarray:
    """固定种子的 Lanczos 初始向量（全 1 向量常是 Laplacian 型矩阵的特征向量，不能用）"""
    v0 = make_rng(0, "lanczos_v0").standard_normal(n)
    return v0 / np.linalg.norm(v0)


def operator_norm(M: np.ndarray, dense_limit: int = DENSE_LIMIT, tol: float = LANCZOS_TOL) -> float:
    """对称矩阵的谱范数 max |λ|"""
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    if n == 0 or not np.any(M):
        return 0.0
    if n < dense_limit or n < 3:
        return float(np.max(np.abs(sla.eigvalsh(M))))
    try:
        vals = eigsh(M, k=1, which="LM", tol=tol, maxiter=10 * n,
                     v0=_start_vector(n), return_eigenvectors=False)
        return float(abs(vals[0]))
    except ArpackNoConvergence:
        logger.warning(f"Lanczos did not converge for operator norm (n={n}), using dense solver")
        return float(np.max(np.abs(sla.eigvalsh(M))))


def min_eigenpair(matmat: Callable[[np.ndarray], np.ndarray], n: int,
                  dense_factory: Callable[[], np.ndarray],
                  dense_limit: int = DENSE_LIMIT, tol: float = LANCZOS_TOL) -> Tuple[float, np.ndarray]:
    """
    最小特征值及单位特征向量

    matmat 计算 M @ X（X 可为向量或矩阵）；dense_factory 按需构造稠密矩阵，
    用于小规模路径以及 Lanczos 不收敛时的回退。
    """
    if n < dense_limit or n < 3:
        vals, vecs = sla.eigh(dense_factory(), subset_by_index=[0, 0])
        return float(vals[0]), vecs[:, 0]
    op = LinearOperator((n, n), matvec=matmat, matmat=matmat, dtype=np.float64)
    try:
        vals, vecs = eigsh(op, k=1, which="SA", tol=tol, maxiter=5 * n, v0=_start_vector(n))
        return float(vals[0]), vecs[:, 0]
    except ArpackNoConvergence:
        logger.warning(f"Lanczos did not converge for lambda_min (n={n}), using dense solver")
        vals, vecs = sla.eigh(dense_factory(), subset_by_index=[0, 0])
        return float(vals[0]), vecs[:, 0]


def smallest_eigenvalues(M: np.ndarray, k: int) -> np.ndarray:
    """最小的 k 个特征值（升序，稠密）"""
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    k = min(k, n)
    if k == 0:
        return np.zeros(0)
    return sla.eigvalsh(M, subset_by_index=[0, k - 1])
