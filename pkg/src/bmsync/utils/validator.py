"""
验证工具函数 - 矩阵与参数不变量
"""
from typing import Tuple, Type

import numpy as np

from ..errors import BmSyncError, InvalidParameterError, InvariantViolationError
from .logger import get_logger

logger = get_logger(__name__)

# 稠密存储上限（桌面级工具）
MAX_DENSE_N = 4096


class Validator:
    """验证器类"""

    @staticmethod
    def validate_square(matrix: np.ndarray, name: str = "matrix") -> Tuple[bool, str]:
        """验证方阵"""
        if not isinstance(matrix, np.ndarray):
            return False, f"{name} must be a numpy array"
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            return False, f"{name} must be square, got shape {matrix.shape}"
        return True, "Valid"

    @staticmethod
    def validate_finite(matrix: np.ndarray, name: str = "matrix") -> Tuple[bool, str]:
        """验证没有 NaN/Inf"""
        if not np.all(np.isfinite(matrix)):
            return False, f"{name} contains non-finite entries"
        return True, "Valid"

    @staticmethod
    def validate_symmetric(matrix: np.ndarray, name: str = "matrix",
                           rtol: float = 0.0) -> Tuple[bool, str]:
        """验证对称；rtol=0 时要求精确对称"""
        if rtol == 0.0:
            ok = np.array_equal(matrix, matrix.T)
        else:
            scale = max(1.0, float(np.max(np.abs(matrix))) if matrix.size else 1.0)
            ok = bool(np.max(np.abs(matrix - matrix.T), initial=0.0) <= rtol * scale)
        if not ok:
            return False, f"{name} is not symmetric"
        return True, "Valid"

    @staticmethod
    def validate_zero_diagonal(matrix: np.ndarray, name: str = "matrix") -> Tuple[bool, str]:
        """验证对角线为零"""
        if np.any(np.diag(matrix) != 0):
            return False, f"{name} must have zero diagonal"
        return True, "Valid"

    @staticmethod
    def validate_nonnegative(matrix: np.ndarray, name: str = "matrix") -> Tuple[bool, str]:
        """验证元素非负"""
        if np.any(matrix < 0):
            return False, f"{name} must have nonnegative entries"
        return True, "Valid"

    @staticmethod
    def validate_signs(entries: np.ndarray, name: str = "signs") -> Tuple[bool, str]:
        """验证每个元素恰为 +1 或 -1"""
        if entries.ndim != 1:
            return False, f"{name} must be a vector, got shape {entries.shape}"
        if not np.all((entries == 1) | (entries == -1)):
            return False, f"{name} entries must be exactly +1 or -1"
        return True, "Valid"

    @staticmethod
    def validate_unit_rows(Y: np.ndarray, tol: float = 1e-12,
                           name: str = "Y") -> Tuple[bool, str]:
        """验证每行单位范数"""
        if Y.ndim != 2:
            return False, f"{name} must be a matrix, got shape {Y.shape}"
        if Y.shape[0] == 0:
            return True, "Valid"
        dev = float(np.max(np.abs(np.linalg.norm(Y, axis=1) - 1.0)))
        if not dev <= tol:
            return False, f"{name} rows deviate from unit norm by {dev:.3e} (tol {tol:.1e})"
        return True, "Valid"

    @staticmethod
    def validate_probability(value: float, name: str = "p") -> Tuple[bool, str]:
        """验证概率取值"""
        if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
            return False, f"{name} must be in [0, 1], got {value}"
        return True, "Valid"

    @staticmethod
    def validate_size(n: int, minimum: int = 1, maximum: int = MAX_DENSE_N) -> Tuple[bool, str]:
        """验证维度"""
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            return False, f"n must be an integer, got {type(n).__name__}"
        if n < minimum:
            return False, f"n must be at least {minimum}, got {n}"
        if n > maximum:
            return False, f"n = {n} exceeds the dense storage limit {maximum}"
        return True, "Valid"


def ensure(result: Tuple[bool, str],
           error: Type[BmSyncError] = InvariantViolationError,
           field: str = "") -> None:
    """把验证结果转换为异常"""
    ok, message = result
    if not ok:
        raise error(message, field=field or None)


def ensure_symmetric_zero_diagonal(matrix: np.ndarray, name: str) -> None:
    """对称、零对角、有限的方阵"""
    ensure(Validator.validate_square(matrix, name), InvariantViolationError, name)
    ensure(Validator.validate_finite(matrix, name), InvariantViolationError, name)
    ensure(Validator.validate_symmetric(matrix, name), InvariantViolationError, name)
    ensure(Validator.validate_zero_diagonal(matrix, name), InvariantViolationError, name)


def ensure_size(n: int, minimum: int = 1) -> None:
    ensure(Validator.validate_size(n, minimum), InvalidParameterError, "n")


def ensure_probability(value: float, name: str) -> None:
    ensure(Validator.validate_probability(value, name), InvalidParameterError, name)


# 常用验证函数的快捷方式
validate_square = Validator.validate_square
validate_symmetric = Validator.validate_symmetric
validate_signs = Validator.validate_signs
validate_unit_rows = Validator.validate_unit_rows
