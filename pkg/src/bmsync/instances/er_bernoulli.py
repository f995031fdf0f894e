"""
Erdős–Rényi 测量图 + Bernoulli 符号噪声

每条边独立以概率 p 出现；边上的测量以概率 (1+δ)/2 等于 z_i z_j，否则取反。
"""
import numpy as np

from ..config.schema import ErBernoulliParams
from ..core.models import CostMatrix, Graph, ProblemInstance
from ..utils.rng import make_rng
from .base import BaseGenerator, build_params, symmetric_from_upper, uniform_signs, upper_pairs


class ErBernoulliGenerator(BaseGenerator):
    """G(n, p) 上的 Bernoulli 噪声测量"""

    params: ErBernoulliParams

    def sample(self, seed: int) -> ProblemInstance:
        n, p, delta = self.params.n, self.params.p, self.params.delta
        truth = uniform_signs(make_rng(seed, "truth"), n)
        m = n * (n - 1) // 2

        edges = make_rng(seed, "graph").random(m) < p
        correct = make_rng(seed, "noise").random(m) < (1.0 + delta) / 2.0

        z = truth.entries.astype(np.float64)
        iu = upper_pairs(n)
        zz = z[iu[0]] * z[iu[1]]
        measured = np.where(correct, zz, -zz)

        A = symmetric_from_upper(n, edges.astype(np.float64))
        C = symmetric_from_upper(n, np.where(edges, measured, 0.0))
        return ProblemInstance(cost=CostMatrix(C), params=self.params, seed=seed,
                               truth=truth, graph=Graph(A))


def gen_er_bernoulli(n: int, p: float, delta: float, seed: int) -> ProblemInstance:
    """生成 ER + Bernoulli 模型实例"""
    params = build_params(ErBernoulliParams, n=n, p=p, delta=delta)
    return ErBernoulliGenerator(params).generate(seed)
