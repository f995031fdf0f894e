"""
实例生成器基类
"""
import time
from abc import ABC, abstractmethod
from typing import Any, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from ..core.models import ProblemInstance, SignVector
from ..errors import InvalidParameterError
from ..utils.logger import get_logger

P = TypeVar("P", bound=BaseModel)


def build_params(model_cls: Type[P], **kwargs: Any) -> P:
    """构造参数模型；pydantic 校验失败转为 InvalidParameterError"""
    try:
        return model_cls(**kwargs)
    except ValidationError as e:
        errors = "; ".join(err["msg"] for err in e.errors())
        raise InvalidParameterError(f"Invalid {model_cls.__name__}: {errors}") from e


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidParameterError(f"seed must be an integer, got {type(seed).__name__}", field="seed")
    if not 0 <= int(seed) < 2 ** 64:
        raise InvalidParameterError(f"seed must be in [0, 2^64), got {seed}", field="seed")
    return int(seed)


def upper_pairs(n: int):
    """严格上三角下标（行优先），所有按对抽样都沿用此顺序"""
    return np.triu_indices(n, k=1)


def symmetric_from_upper(n: int, values: np.ndarray) -> np.ndarray:
    """由上三角取值构造对称零对角矩阵"""
    out = np.zeros((n, n), dtype=np.float64)
    iu = upper_pairs(n)
    out[iu] = values
    out[(iu[1], iu[0])] = values
    return out


def uniform_signs(rng: np.random.Generator, n: int) -> SignVector:
    """{±1}^n 上的均匀分布"""
    return SignVector(rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1)


def balanced_signs(rng: np.random.Generator, n: int) -> SignVector:
    """均匀随机的平衡符号向量（恰好一半为 -1）"""
    entries = np.ones(n, dtype=np.int8)
    entries[rng.permutation(n)[: n // 2]] = -1
    return SignVector(entries, balanced=True)


class BaseGenerator(ABC):
    """实例生成器基类：(params, seed) 的纯函数"""

    def __init__(self, params: BaseModel):
        self.params = params
        self.logger = get_logger(__name__)
        self.name = self.__class__.__name__

    @abstractmethod
    def sample(self, seed: int) -> ProblemInstance:
        pass

    def generate(self, seed: int) -> ProblemInstance:
        seed = check_seed(seed)
        start_time = time.time()
        instance = self.sample(seed)
        latency_ms = (time.time() - start_time) * 1000
        self.logger.debug(f"{self.name} generated n={instance.n} seed={seed} "
                          f"in {latency_ms:.2f}ms")
        return instance
