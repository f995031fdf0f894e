"""
平衡二分随机块模型
"""
import numpy as np

from ..config.schema import Centering, SbmParams
from ..core.models import Graph, ProblemInstance
from ..utils.rng import make_rng
from .base import BaseGenerator, balanced_signs, build_params, symmetric_from_upper, upper_pairs
from .costs import build_sbm_cost


def expected_adjacency(n: int, z: np.ndarray, p: float, q: float) -> np.ndarray:
    """E A = (p-q)/2 zzᵀ + (p+q)/2 11ᵀ - pI"""
    z = np.asarray(z, dtype=np.float64)
    EA = (p - q) / 2.0 * np.outer(z, z) + (p + q) / 2.0
    np.fill_diagonal(EA, 0.0)
    return EA


class SbmGenerator(BaseGenerator):
    """簇内概率 p、簇间概率 q 的两簇 SBM"""

    params: SbmParams

    def sample(self, seed: int) -> ProblemInstance:
        n, p, q = self.params.n, self.params.p, self.params.q
        truth = balanced_signs(make_rng(seed, "truth"), n)

        iu = upper_pairs(n)
        same = truth.entries[iu[0]] == truth.entries[iu[1]]
        prob = np.where(same, p, q)
        edges = make_rng(seed, "graph").random(prob.shape[0]) < prob

        graph = Graph(symmetric_from_upper(n, edges.astype(np.float64)))
        cost = build_sbm_cost(graph, self.params.centering, p, q)
        return ProblemInstance(cost=cost, params=self.params, seed=seed, truth=truth, graph=graph)


def gen_sbm(n: int, p: float, q: float, centering: Centering = Centering.MEAN_ESTIMATE,
            seed: int = 0) -> ProblemInstance:
    """生成 SBM 实例"""
    params = build_params(SbmParams, n=n, p=p, q=q, centering=centering)
    return SbmGenerator(params).generate(seed)
