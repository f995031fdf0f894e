"""
代价矩阵构造与测量分解
"""
from typing import Optional, Tuple, Union

import numpy as np

from ..config.schema import Centering, ErBernoulliParams, GaussianParams, RawParams, SbmParams
from ..core.models import CostMatrix, Graph, NoiseMatrix, ProblemInstance, SignVector
from ..errors import (
    DimensionMismatchError,
    InvalidParameterError,
    InvariantViolationError,
    MissingTruthError,
)
from ..utils.validator import ensure_probability, ensure_size

# measurement_decomposition 的两种分解方式
MEASURED = "measured"
COMPLETE = "complete"


def build_sbm_cost(A: Graph, centering: Union[Centering, str],
                   p: Optional[float] = None, q: Optional[float] = None) -> CostMatrix:
    """
    SBM 代价矩阵

    MEAN_ESTIMATE: C = A - (1/n²)⟨A, 11ᵀ⟩ 11ᵀ
    KNOWN_PQ:      C = A - (p+q)/2 · 11ᵀ
    两种情况对角线均置零。
    """
    try:
        centering = Centering(centering)
    except ValueError as e:
        raise InvalidParameterError(f"Unknown centering: {centering}", field="centering") from e

    n = A.n
    if centering == Centering.KNOWN_PQ:
        if p is None or q is None:
            raise InvalidParameterError("known_pq centering requires both p and q", field="centering")
        ensure_probability(p, "p")
        ensure_probability(q, "q")
        shift = (p + q) / 2.0
    else:
        shift = float(A.weights.sum()) / float(n * n) if n else 0.0

    C = A.weights - shift
    np.fill_diagonal(C, 0.0)
    return CostMatrix(C)


def _conjugated(graph: Graph, z: SignVector) -> np.ndarray:
    """diag(z) A diag(z)"""
    s = z.as_float()
    return graph.weights * np.outer(s, s)


def measurement_decomposition(inst: ProblemInstance,
                              kind: str = MEASURED) -> Tuple[Graph, NoiseMatrix]:
    """
    把代价矩阵分解为 C = diag(z) A diag(z) + Δ

    kind = "measured" 使用实际测量图（ER-Bernoulli）；
    kind = "complete" 使用缩放完全图 δp(11ᵀ - I) 或 (p-q)/2 (11ᵀ - I)。
    高斯模型两种方式一致；SBM 只有完全图分解。
    """
    if kind not in (MEASURED, COMPLETE):
        raise InvalidParameterError(f"Unknown decomposition kind: {kind}", field="kind")
    if inst.truth is None:
        raise MissingTruthError("measurement decomposition requires the ground truth", field="truth")

    params = inst.params
    n = inst.n
    if isinstance(params, GaussianParams):
        graph = Graph.complete(n)
    elif isinstance(params, ErBernoulliParams):
        if kind == MEASURED:
            assert inst.graph is not None
            graph = inst.graph
        else:
            graph = Graph.complete(n, params.delta * params.p)
    elif isinstance(params, SbmParams):
        graph = Graph.complete(n, (params.p - params.q) / 2.0)
    elif isinstance(params, RawParams):
        if inst.graph is None:
            raise InvalidParameterError("raw instances have no measurement model", field="model")
        graph = inst.graph
    else:  # pragma: no cover
        raise InvalidParameterError(f"Unsupported model: {params.model}")

    noise = NoiseMatrix.from_matrix(inst.cost.entries - _conjugated(graph, inst.truth))
    return graph, noise


def effective_graph(graph: Graph, delta_plus: np.ndarray, z: SignVector) -> Graph:
    """A′ = A + Δ⁺ ∘ zzᵀ；Δ⁺ 必须满足 Δ⁺_ij z_i z_j ≥ 0"""
    delta_plus = np.asarray(delta_plus, dtype=np.float64)
    if delta_plus.shape != graph.weights.shape or z.n != graph.n:
        raise DimensionMismatchError(
            f"graph {graph.weights.shape}, perturbation {delta_plus.shape}, truth {z.n}")
    s = z.as_float()
    aligned = delta_plus * np.outer(s, s)
    if np.any(aligned < 0):
        raise InvariantViolationError("perturbation violates the monotone sign condition",
                                      field="delta_plus")
    return Graph(graph.weights + aligned)


def raw_instance(C: np.ndarray, truth: Optional[SignVector] = None, seed: int = 0,
                 graph: Optional[Graph] = None) -> ProblemInstance:
    """包装用户提供的代价矩阵（对角线置零；非对称输入为不变量违例）"""
    arr = np.asarray(C, dtype=np.float64)
    if arr.ndim != 2:
        raise InvariantViolationError(f"cost must be a matrix, got shape {arr.shape}", field="cost")
    ensure_size(arr.shape[0])
    cost = CostMatrix.from_matrix(arr)
    return ProblemInstance(cost=cost, params=RawParams(n=cost.n), seed=seed,
                           truth=truth, graph=graph)
