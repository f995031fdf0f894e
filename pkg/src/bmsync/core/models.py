"""
领域数据结构 - 构造后不可变，可在线程间只读共享
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..config.schema import (
    ErBernoulliParams,
    ModelParams,
    RawParams,
    SbmParams,
)
from ..errors import DimensionMismatchError, InvariantViolationError
from ..utils.validator import (
    Validator,
    ensure,
    ensure_symmetric_zero_diagonal,
)

# 单位行范数与切向正交性的容差
ROW_NORM_TOL = 1e-12
TANGENT_TOL = 1e-12


def _frozen(values: Any, dtype: Any = np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SignVector:
    """符号向量 z ∈ {±1}^n；balanced 标记要求元素和为零"""
    entries: np.ndarray
    balanced: bool = False

    def __post_init__(self):
        arr = np.asarray(self.entries)
        ensure(Validator.validate_signs(arr, "SignVector"), InvariantViolationError, "truth")
        object.__setattr__(self, "entries", _frozen(arr, np.int8))
        if self.balanced and int(np.sum(self.entries, dtype=np.int64)) != 0:
            raise InvariantViolationError(
                "balanced SignVector must sum to zero (requires even n)", field="truth")

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignVector):
            return NotImplemented
        return self.balanced == other.balanced and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.entries.tobytes(), self.balanced))

    def as_float(self) -> np.ndarray:
        return self.entries.astype(np.float64)

    def is_balanced(self) -> bool:
        return int(np.sum(self.entries, dtype=np.int64)) == 0

    def equals_up_to_sign(self, other: "SignVector") -> bool:
        return (np.array_equal(self.entries, other.entries)
                or np.array_equal(self.entries, -other.entries))

    def flipped(self, i: int) -> "SignVector":
        """第 i 个元素取反（结果不再标记为平衡）"""
        arr = self.entries.copy()
        arr[i] = -arr[i]
        return SignVector(arr)

    @classmethod
    def ones(cls, n: int) -> "SignVector":
        return cls(np.ones(n, dtype=np.int8))


@dataclass(frozen=True, eq=False)
class Graph:
    """无向（可加权）图的邻接矩阵：对称、零对角、非负"""
    weights: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.weights, dtype=np.float64)
        ensure_symmetric_zero_diagonal(arr, "graph")
        ensure(Validator.validate_nonnegative(arr, "graph"), InvariantViolationError, "graph")
        object.__setattr__(self, "weights", _frozen(arr))

    @property
    def n(self) -> int:
        return int(self.weights.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def laplacian(self) -> np.ndarray:
        """L = diag(A1) - A"""
        return np.diag(self.degrees()) - self.weights

    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    @classmethod
    def complete(cls, n: int, weight: float = 1.0) -> "Graph":
        w = np.full((n, n), float(weight))
        np.fill_diagonal(w, 0.0)
        return cls(w)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n)))


@dataclass(frozen=True, eq=False)
class NoiseMatrix:
    """噪声矩阵 Δ：对称、零对角"""
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.float64)
        ensure_symmetric_zero_diagonal(arr, "noise")
        object.__setattr__(self, "entries", _frozen(arr))

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NoiseMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    @classmethod
    def zeros(cls, n: int) -> "NoiseMatrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "NoiseMatrix":
        """对角线置零后构造；输入须已对称"""
        arr = np.array(matrix, dtype=np.float64, copy=True)
        np.fill_diagonal(arr, 0.0)
        return cls(arr)


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """代价矩阵 C：对称、零对角（对角线对优化景观没有影响，统一存为零）"""
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.float64)
        ensure_symmetric_zero_diagonal(arr, "cost")
        object.__setattr__(self, "entries", _frozen(arr))

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CostMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def conjugate(self, signs: SignVector) -> "CostMatrix":
        """diag(s) C diag(s)"""
        s = signs.as_float()
        return CostMatrix(self.entries * np.outer(s, s))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "CostMatrix":
        """对角线置零后构造；非对称输入视为不变量违例"""
        arr = np.array(matrix, dtype=np.float64, copy=True)
        if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
            np.fill_diagonal(arr, 0.0)
        return cls(arr)

    @classmethod
    def zeros(cls, n: int) -> "CostMatrix":
        return cls(np.zeros((n, n)))


@dataclass(frozen=True, eq=False)
class FactorPoint:
    """Burer-Monteiro 可行点 Y ∈ R^{n×r}，每行单位范数"""
    Y: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.Y, dtype=np.float64)
        if arr.ndim != 2:
            raise InvariantViolationError(f"FactorPoint must be n×r, got shape {arr.shape}", field="Y")
        ensure(Validator.validate_finite(arr, "Y"), InvariantViolationError, "Y")
        ensure(Validator.validate_unit_rows(arr, ROW_NORM_TOL), InvariantViolationError, "Y")
        object.__setattr__(self, "Y", _frozen(arr))

    @property
    def n(self) -> int:
        return int(self.Y.shape[0])

    @property
    def r(self) -> int:
        return int(self.Y.shape[1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FactorPoint):
            return NotImplemented
        return np.array_equal(self.Y, other.Y)

    def gram(self) -> np.ndarray:
        """YYᵀ（仅在证书/报告路径使用）"""
        return self.Y @ self.Y.T

    @classmethod
    def from_rank_one(cls, signs: SignVector, u: np.ndarray) -> "FactorPoint":
        """Y = z uᵀ，u 会被单位化"""
        u = np.asarray(u, dtype=np.float64)
        return cls(np.outer(signs.as_float(), u / np.linalg.norm(u)))


@dataclass(frozen=True, eq=False)
class TangentMatrix:
    """切向量 V：对每一行 ⟨Y_i, V_i⟩ = 0"""
    V: np.ndarray
    base: FactorPoint

    def __post_init__(self):
        arr = np.asarray(self.V, dtype=np.float64)
        if arr.shape != self.base.Y.shape:
            raise DimensionMismatchError(
                f"tangent shape {arr.shape} does not match base point {self.base.Y.shape}")
        inner = np.abs(np.einsum("ij,ij->i", arr, self.base.Y))
        scale = np.maximum(1.0, np.linalg.norm(arr, axis=1))
        if arr.size and float(np.max(inner / scale)) > TANGENT_TOL:
            raise InvariantViolationError("TangentMatrix rows are not orthogonal to the base point",
                                          field="V")
        object.__setattr__(self, "V", _frozen(arr))

    def norm(self) -> float:
        return float(np.linalg.norm(self.V))


@dataclass(frozen=True, eq=False)
class CertificateMatrix:
    """证书矩阵 S(Y) = ddiag(CYYᵀ) - C"""
    S: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.S, dtype=np.float64)
        ensure(Validator.validate_square(arr, "S"), InvariantViolationError, "S")
        ensure(Validator.validate_symmetric(arr, "S", rtol=1e-12), InvariantViolationError, "S")
        object.__setattr__(self, "S", _frozen(arr))

    @property
    def n(self) -> int:
        return int(self.S.shape[0])


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    """问题实例：代价矩阵 + 可选真值 + 可选测量图 + 模型参数 + 种子"""
    cost: CostMatrix
    params: ModelParams
    seed: int
    truth: Optional[SignVector] = None
    graph: Optional[Graph] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        n = self.cost.n
        if self.truth is not None and self.truth.n != n:
            raise DimensionMismatchError(f"truth has length {self.truth.n}, cost is {n}×{n}")
        if self.graph is not None and self.graph.n != n:
            raise DimensionMismatchError(f"graph has {self.graph.n} vertices, cost is {n}×{n}")
        if not isinstance(self.params, RawParams) and getattr(self.params, "n", n) != n:
            raise DimensionMismatchError(f"params.n = {self.params.n} but cost is {n}×{n}")
        if isinstance(self.params, SbmParams):
            if self.truth is None or not self.truth.is_balanced():
                raise InvariantViolationError("SBM instances require a balanced truth vector",
                                              field="truth")
        if isinstance(self.params, (ErBernoulliParams, SbmParams)) and self.graph is None:
            raise InvariantViolationError(f"{self.params.model} instances require a graph",
                                          field="graph")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise InvariantViolationError(f"seed must be a 64-bit unsigned integer, got {self.seed}",
                                          field="seed")

    @property
    def n(self) -> int:
        return self.cost.n

    @property
    def model(self) -> str:
        return self.params.model

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return (self.cost == other.cost
                and self.params == other.params
                and int(self.seed) == int(other.seed)
                and self.truth == other.truth
                and self.graph == other.graph
                and self.metadata == other.metadata)

    def with_cost(self, cost: CostMatrix, **metadata: Any) -> "ProblemInstance":
        """替换代价矩阵，保留其它字段"""
        meta = {**self.metadata, **metadata}
        return ProblemInstance(cost=cost, params=self.params, seed=self.seed,
                               truth=self.truth, graph=self.graph, metadata=meta)

    def to_dict(self) -> Dict[str, Any]:
        """不含矩阵数据的摘要"""
        return {
            "n": self.n,
            "model": self.model,
            "params": self.params.model_dump(mode="json"),
            "seed": int(self.seed),
            "has_truth": self.truth is not None,
            "has_graph": self.graph is not None,
            "metadata": dict(self.metadata),
        }
