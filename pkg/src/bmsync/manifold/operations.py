"""
流形运算的类型化接口

所有函数都是纯函数；目标函数与梯度只计算 CY（n×r），从不构造 YYᵀ。
"""
import numpy as np

from ..core.models import CertificateMatrix, CostMatrix, FactorPoint, TangentMatrix
from ..errors import DimensionMismatchError
from ..utils.rng import make_rng
from .oblique import BurerMonteiroCost, ObliqueManifold


def _check_dims(C: CostMatrix, Y: FactorPoint) -> None:
    if C.n != Y.n:
        raise DimensionMismatchError(f"cost is {C.n}×{C.n} but Y has {Y.n} rows")


def _check_tangent(Y: FactorPoint, V: TangentMatrix) -> None:
    if V.V.shape != Y.Y.shape:
        raise DimensionMismatchError(f"tangent shape {V.V.shape} does not match Y {Y.Y.shape}")


def random_point(n: int, r: int, seed: int) -> FactorPoint:
    """每行独立均匀分布在 S^{r-1} 上"""
    manifold = ObliqueManifold(n, r)
    return FactorPoint(manifold.random(make_rng(seed, "random_point")))


def objective(C: CostMatrix, Y: FactorPoint) -> float:
    """⟨C, YYᵀ⟩"""
    _check_dims(C, Y)
    return BurerMonteiroCost(C.entries).value(Y.Y)


def euclidean_gradient(C: CostMatrix, Y: FactorPoint) -> np.ndarray:
    """环境空间梯度 2CY"""
    _check_dims(C, Y)
    return BurerMonteiroCost(C.entries).egrad(Y.Y)


def s_matrix(C: CostMatrix, Y: FactorPoint) -> CertificateMatrix:
    """S(Y) = ddiag(CYYᵀ) - C"""
    _check_dims(C, Y)
    cost = BurerMonteiroCost(C.entries)
    _, _, d = cost.value_and_cy(Y.Y)
    return CertificateMatrix(cost.s_dense(d))


def riemannian_gradient(C: CostMatrix, Y: FactorPoint) -> TangentMatrix:
    """G_i = 2[(CY)_i - ⟨(CY)_i, Y_i⟩ Y_i]"""
    _check_dims(C, Y)
    cost = BurerMonteiroCost(C.entries)
    _, CY, d = cost.value_and_cy(Y.Y)
    return TangentMatrix(cost.rgrad_from(Y.Y, CY, d), Y)


def project_tangent(Y: FactorPoint, V: np.ndarray) -> TangentMatrix:
    """V_i ← V_i - ⟨V_i, Y_i⟩ Y_i"""
    V = np.asarray(V, dtype=np.float64)
    if V.shape != Y.Y.shape:
        raise DimensionMismatchError(f"ambient matrix {V.shape} does not match Y {Y.Y.shape}")
    return TangentMatrix(ObliqueManifold(Y.n, Y.r).proju(Y.Y, V), Y)


def retract(Y: FactorPoint, V: TangentMatrix, t: float) -> FactorPoint:
    """度量投影收缩；t = 0 时原样返回 Y"""
    _check_tangent(Y, V)
    if t == 0:
        return Y
    return FactorPoint(ObliqueManifold(Y.n, Y.r).retr(Y.Y, V.V, t))


def hessian_form(C: CostMatrix, Y: FactorPoint, V: TangentMatrix) -> float:
    """⟨S(Y), VVᵀ⟩；二阶临界点处对所有切向量非负"""
    _check_dims(C, Y)
    _check_tangent(Y, V)
    cost = BurerMonteiroCost(C.entries)
    _, _, d = cost.value_and_cy(Y.Y)
    return cost.hessian_form(d, V.V)


def inner(Y: FactorPoint, U: TangentMatrix, V: TangentMatrix) -> float:
    """Frobenius 度量"""
    _check_tangent(Y, U)
    _check_tangent(Y, V)
    return float(np.sum(U.V * V.V))


def random_tangent(Y: FactorPoint, seed: int) -> TangentMatrix:
    """单位范数的随机切向量"""
    manifold = ObliqueManifold(Y.n, Y.r)
    return TangentMatrix(manifold.random_tangent(Y.Y, make_rng(seed, "random_tangent")), Y)


def is_feasible(Y: np.ndarray, tol: float = 1e-12) -> bool:
    """每行单位范数"""
    Y = np.asarray(Y, dtype=np.float64)
    return Y.ndim == 2 and ObliqueManifold(max(Y.shape[0], 1), max(Y.shape[1], 1)).is_feasible(Y, tol)
