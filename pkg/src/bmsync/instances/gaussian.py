"""
高斯噪声 Z2 同步：C = zzᵀ + σW（对角线置零）
"""
import numpy as np

from ..config.schema import GaussianParams
from ..core.models import CostMatrix, ProblemInstance
from ..utils.rng import make_rng
from .base import BaseGenerator, build_params, symmetric_from_upper, uniform_signs


class GaussianGenerator(BaseGenerator):
    """完全图 + 对称标准高斯噪声"""

    params: GaussianParams

    def sample(self, seed: int) -> ProblemInstance:
        n, sigma = self.params.n, self.params.sigma
        truth = uniform_signs(make_rng(seed, "truth"), n)

        noise_rng = make_rng(seed, "noise")
        W = symmetric_from_upper(n, noise_rng.standard_normal(n * (n - 1) // 2))

        z = truth.as_float()
        C = np.outer(z, z) + sigma * W
        np.fill_diagonal(C, 0.0)
        return ProblemInstance(cost=CostMatrix(C), params=self.params, seed=seed, truth=truth)


def gen_gaussian(n: int, sigma: float, seed: int) -> ProblemInstance:
    """生成高斯模型实例"""
    return GaussianGenerator(build_params(GaussianParams, n=n, sigma=sigma)).generate(seed)
