"""
单位球乘积（oblique 流形）上的数组级几何运算

可行集 {Y ∈ R^{n×r} : ddiag(YYᵀ) = I_n}；度量为 Frobenius 内积，
收缩映射为逐行归一化（度量投影）。
"""
import numpy as np

from ..errors import DegenerateStepError, InvalidParameterError


def row_dot(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """逐行内积 ⟨U_i, V_i⟩"""
    return np.einsum("ij,ij->i", U, V)


class ObliqueManifold:
    """n 个 r 维单位球的乘积"""

    def __init__(self, n: int, r: int):
        if n < 1:
            raise InvalidParameterError(f"n must be positive, got {n}")
        if r < 1:
            raise InvalidParameterError(f"r must be at least 1, got {r}")
        self.n = n
        self.r = r

    @property
    def shape(self):
        return (self.n, self.r)

    def random(self, rng: np.random.Generator) -> np.ndarray:
        """每行独立均匀分布在单位球面上（标准高斯行归一化）"""
        X = rng.standard_normal(self.shape)
        norms = np.linalg.norm(X, axis=1)
        # 零行的概率为零，但仍然重抽
        while np.any(norms == 0.0):
            bad = norms == 0.0
            X[bad] = rng.standard_normal((int(bad.sum()), self.r))
            norms = np.linalg.norm(X, axis=1)
        return X / norms[:, None]

    def projx(self, X: np.ndarray) -> np.ndarray:
        """逐行归一化"""
        norms = np.linalg.norm(X, axis=1)
        if np.any(norms == 0.0):
            raise DegenerateStepError("cannot normalize a zero row; shrink the step")
        return X / norms[:, None]

    def proju(self, Y: np.ndarray, V: np.ndarray) -> np.ndarray:
        """切空间投影 V_i ← V_i - ⟨V_i, Y_i⟩ Y_i"""
        return V - row_dot(V, Y)[:, None] * Y

    def retr(self, Y: np.ndarray, V: np.ndarray, t: float = 1.0) -> np.ndarray:
        """度量投影收缩 (Y_i + tV_i) / ‖Y_i + tV_i‖；t = 0 时原样返回"""
        if t < 0:
            raise InvalidParameterError(f"step must be nonnegative, got {t}")
        if t == 0:
            return Y
        return self.projx(Y + t * V)

    def inner(self, U: np.ndarray, V: np.ndarray) -> float:
        return float(np.sum(U * V))

    def random_tangent(self, Y: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """投影后的标准高斯方向，单位化"""
        V = self.proju(Y, rng.standard_normal(self.shape))
        nrm = np.linalg.norm(V)
        return V / nrm if nrm > 0 else V

    def is_feasible(self, Y: np.ndarray, tol: float = 1e-12) -> bool:
        return Y.shape == self.shape and bool(
            np.all(np.abs(np.linalg.norm(Y, axis=1) - 1.0) <= tol))


class BurerMonteiroCost:
    """目标 f(Y) = ⟨C, YYᵀ⟩ 及其导数；从不显式构造 YYᵀ"""

    def __init__(self, C: np.ndarray):
        self.C = C
        self.n = C.shape[0]

    def value_and_cy(self, Y: np.ndarray):
        """返回 (f(Y), CY, d)，d_i = ⟨(CY)_i, Y_i⟩ 即 ddiag(CYYᵀ) 的对角"""
        CY = self.C @ Y
        d = row_dot(CY, Y)
        return float(np.sum(d)), CY, d

    def value(self, Y: np.ndarray) -> float:
        return self.value_and_cy(Y)[0]

    def tangent_step_increment(self, Y: np.ndarray, CY: np.ndarray, V: np.ndarray, t: float) -> float:
        """
        沿切向量 V 收缩一步的增量 f(R(tV)) - f(Y) = 2⟨CY, D⟩ + ⟨CD, D⟩

        D = (tV_i - s_i/(1+√(1+s_i)) Y_i) / √(1+s_i)，s_i = t²‖V_i‖²，按解析式计算，
        不经过归一化后的 Y_new - Y，增量远小于 |f| 的舍入误差时仍然准确。
        """
        s = t * t * row_dot(V, V)
        norm = np.sqrt(1.0 + s)
        D = (t * V - (s / (1.0 + norm))[:, None] * Y) / norm[:, None]
        return float(2.0 * np.sum(CY * D) + np.sum((self.C @ D) * D))

    def egrad(self, Y: np.ndarray) -> np.ndarray:
        """欧氏梯度 2CY"""
        return 2.0 * (self.C @ Y)

    def rgrad_from(self, Y: np.ndarray, CY: np.ndarray, d: np.ndarray) -> np.ndarray:
        """黎曼梯度 2[(CY)_i - ⟨(CY)_i, Y_i⟩ Y_i]"""
        G = 2.0 * (CY - d[:, None] * Y)
        return G - row_dot(G, Y)[:, None] * Y

    def s_times(self, d: np.ndarray, X: np.ndarray) -> np.ndarray:
        """S(Y) X = diag(d) X - C X"""
        return d[:, None] * X - self.C @ X

    def s_dense(self, d: np.ndarray) -> np.ndarray:
        S = -np.array(self.C, dtype=np.float64, copy=True)
        S[np.diag_indices_from(S)] += d
        return S

    def hessian_form(self, d: np.ndarray, V: np.ndarray) -> float:
        """⟨S(Y), VVᵀ⟩ = Σ_i d_i ‖V_i‖² - ⟨CV, V⟩"""
        return float(np.sum(d * row_dot(V, V)) - np.sum((self.C @ V) * V))
