"""
异常层次与错误代码
"""
from typing import Optional


class ErrorCode:
    """错误代码"""
    VALIDATION_ERROR = "VALIDATION_ERROR"
    INVARIANT_VIOLATION = "INVARIANT_VIOLATION"
    NUMERICAL_ERROR = "NUMERICAL_ERROR"
    IO_ERROR = "IO_ERROR"
    INTERNAL_ERROR = "INTERNAL_ERROR"


class ExitCode:
    """命令行退出码"""
    SUCCESS = 0
    USAGE = 1
    VERIFICATION = 2
    IO = 3


class BmSyncError(Exception):
    """所有 bmsync 异常的基类"""
    code = ErrorCode.INTERNAL_ERROR

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class InvalidParameterError(BmSyncError, ValueError):
    """前置条件不满足（参数越界、维度过大等）"""
    code = ErrorCode.VALIDATION_ERROR


class DimensionMismatchError(InvalidParameterError):
    """矩阵维度不一致"""


class MissingTruthError(InvalidParameterError):
    """操作需要真实标签但实例中没有"""


class InvariantViolationError(BmSyncError, ValueError):
    """数据违反类型不变量（对称性、单位行范数、符号取值等）"""
    code = ErrorCode.INVARIANT_VIOLATION


class MalformedFileError(InvariantViolationError):
    """实例文件格式错误，field 指出出错字段"""


class NonFiniteError(BmSyncError, ArithmeticError):
    """计算中出现 NaN/Inf"""
    code = ErrorCode.NUMERICAL_ERROR


class DegenerateStepError(BmSyncError, ArithmeticError):
    """收缩映射遇到零行，调用方需要缩小步长"""
    code = ErrorCode.NUMERICAL_ERROR


class StorageError(BmSyncError, OSError):
    """文件读写失败"""
    code = ErrorCode.IO_ERROR


def exit_code_for(exc: BaseException) -> int:
    """把异常映射为命令行退出码"""
    # pydantic 的校验错误也是参数错误
    from pydantic import ValidationError

    if isinstance(exc, (StorageError, FileNotFoundError, PermissionError, IsADirectoryError)):
        return ExitCode.IO
    if isinstance(exc, (InvariantViolationError, NonFiniteError, DegenerateStepError)):
        return ExitCode.VERIFICATION
    if isinstance(exc, (InvalidParameterError, ValidationError, ValueError, TypeError)):
        return ExitCode.USAGE
    if isinstance(exc, OSError):
        return ExitCode.IO
    return ExitCode.VERIFICATION
