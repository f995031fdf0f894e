"""
多起点求解
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

from ..config.schema import SolverConfig
from ..core.models import CostMatrix
from ..core.reports import SolveResult
from ..errors import InvalidParameterError
from ..utils.logger import get_logger
from ..utils.rng import derive_seed
from .ascent import solve

logger = get_logger(__name__)

# 目标值的相对并列容差
TIE_RTOL = 1e-10


@dataclass(frozen=True)
class MultiStartResult:
    """全部起点的结果（按起点编号排列）及最优者编号"""
    results: List[SolveResult]
    best_index: int

    @property
    def best(self) -> SolveResult:
        return self.results[self.best_index]


def start_seed(seed: int, index: int) -> int:
    """第 0 个起点直接使用 seed，使 starts=1 与 solve 一致"""
    return seed if index == 0 else derive_seed(seed, "start", index)


def select_best(results: List[SolveResult]) -> int:
    """已收敛结果中目标值最高者；都未收敛时在全部结果中选。并列取编号最小者"""
    pool = [i for i, res in enumerate(results) if res.converged] or list(range(len(results)))
    best = pool[0]
    for i in pool[1:]:
        cur, top = results[i].objective_value, results[best].objective_value
        if cur > top + TIE_RTOL * max(1.0, abs(top)):
            best = i
    return best


def multi_start(C: CostMatrix, r: int, cfg: Optional[SolverConfig] = None, starts: int = 1,
                seed: int = 0, jobs: int = 1) -> MultiStartResult:
    """
    从 starts 个派生种子分别求解

    jobs > 1 时用线程池并发执行；结果按起点编号收集，与执行顺序无关。
    """
    if starts < 1:
        raise InvalidParameterError(f"starts must be at least 1, got {starts}", field="starts")
    seeds = [start_seed(seed, k) for k in range(starts)]

    if jobs > 1 and starts > 1:
        with ThreadPoolExecutor(max_workers=min(jobs, starts)) as pool:
            results = list(pool.map(lambda s: solve(C, r, cfg, seed=s), seeds))
    else:
        results = [solve(C, r, cfg, seed=s) for s in seeds]

    best = select_best(results)
    converged = sum(res.converged for res in results)
    logger.debug(f"multi_start: {converged}/{starts} converged, best start {best} "
                 f"(objective {results[best].objective_value:.6g})")
    return MultiStartResult(results=results, best_index=best)
