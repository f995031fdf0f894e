"""
穷举 oracle：小规模 {±1}^n 上的精确最优
"""
from typing import Tuple

import numpy as np

from ..core.models import CostMatrix, SignVector
from ..errors import InvalidParameterError
from ..utils.logger import get_logger

logger = get_logger(__name__)

MAX_BRUTE_FORCE_N = 22
# 每批枚举的符号模式数
_CHUNK = 1 << 16
# 目标值的并列容差（相对）
_TIE_RTOL = 1e-12


def _patterns(n: int, start: int, stop: int) -> np.ndarray:
    """
    编号 k 的符号模式：x₁ = +1，x_{j+1} 取 k 的第 n-1-j 个二进制位（1 表示 -1）

    编号递增即字典序（+1 排在 -1 之前），全 1 向量编号为 0。
    """
    k = np.arange(start, stop, dtype=np.int64)[:, None]
    shifts = np.arange(n - 2, -1, -1, dtype=np.int64)[None, :]
    bits = (k >> shifts) & 1
    X = np.ones((stop - start, n))
    X[:, 1:] = 1.0 - 2.0 * bits
    return X


def brute_force_opt(C: CostMatrix) -> Tuple[SignVector, float]:
    """
    枚举 2^{n-1} 个符号模式求 max ⟨C, xxᵀ⟩

    并列时取字典序最小的模式。
    """
    n = C.n
    if n > MAX_BRUTE_FORCE_N:
        raise InvalidParameterError(
            f"brute force is limited to n <= {MAX_BRUTE_FORCE_N}, got n = {n}", field="n")
    if n == 1:
        return SignVector.ones(1), 0.0

    total = 1 << (n - 1)
    values = np.empty(total)
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        X = _patterns(n, start, stop)
        values[start:stop] = np.einsum("ij,ij->i", X @ C.entries, X)

    top = float(values.max())
    best = int(np.flatnonzero(values >= top - _TIE_RTOL * max(1.0, abs(top)))[0])
    x = _patterns(n, best, best + 1)[0].astype(np.int8)
    logger.debug(f"brute force over {total} patterns (n={n}): value {values[best]:.12g}")
    return SignVector(x), float(values[best])


def single_flip_gains(C: CostMatrix, x: SignVector) -> np.ndarray:
    """
    翻转每个 x_i 后目标的变化量

    C 对角为零时 ⟨C, x'x'ᵀ⟩ - ⟨C, xxᵀ⟩ = -4 x_i (Cx)_i。
    """
    if x.n != C.n:
        raise InvalidParameterError(f"sign vector has length {x.n}, cost is {C.n}×{C.n}", field="x")
    xf = x.as_float()
    return -4.0 * xf * (C.entries @ xf)
