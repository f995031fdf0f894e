"""
黎曼梯度上升求解器

Armijo 回溯（首个试探步长取 Barzilai-Borwein 步长）+ 沿 λ_min(S(Y)) 特征向量的负曲率逃逸。
所有容差按 (1 + ‖C‖_op) 缩放。
"""
import math
import time
from typing import List, Optional, Tuple

import numpy as np

from ..config.schema import SolverConfig
from ..core.models import CostMatrix, FactorPoint
from ..core.reports import SolveResult, SolveStatus, TraceEntry, TraceEvent
from ..errors import DimensionMismatchError, InvalidParameterError, NonFiniteError
from ..manifold.oblique import BurerMonteiroCost, ObliqueManifold
from ..utils.logger import get_logger
from ..utils.rng import make_rng
from ..utils.spectral import min_eigenpair, operator_norm

# BB 步长相对 1/(1+‖C‖) 的裁剪区间
_BB_MIN = 1e-6
_BB_MAX = 1e3
# 逃逸方向切向投影后的退化阈值
_DEGENERATE_NORM = 1e-12


def default_rank(n: int) -> int:
    """max(4, ⌈log₂ n⌉)"""
    return max(4, math.ceil(math.log2(n))) if n > 1 else 4


class RiemannianAscent:
    """单次求解；实例只在一次 solve 内使用"""

    def __init__(self, C: CostMatrix, r: int, config: Optional[SolverConfig] = None):
        if r < 2:
            raise InvalidParameterError(f"rank r must be at least 2, got {r}", field="r")
        self.config = config or SolverConfig()
        self.C = C
        self.n = C.n
        self.r = r
        self.manifold = ObliqueManifold(self.n, r)
        self.cost = BurerMonteiroCost(C.entries)
        self.logger = get_logger(__name__)

        self.c_opnorm = operator_norm(C.entries, self.config.dense_limit, self.config.lanczos_tol)
        if not math.isfinite(self.c_opnorm):
            raise NonFiniteError("operator norm of the cost matrix is not finite")
        self.scale = 1.0 + self.c_opnorm

    # ---- 内部工具 ----

    def _evaluate(self, Y: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
        """返回 (CY, d, G, ‖S(Y)Y‖_F)"""
        _, CY, d = self.cost.value_and_cy(Y)
        G = self.cost.rgrad_from(Y, CY, d)
        sy = float(np.linalg.norm(d[:, None] * Y - CY))
        if not (np.all(np.isfinite(G)) and math.isfinite(sy)):
            raise NonFiniteError("non-finite gradient encountered; the input is corrupted")
        return CY, d, G, sy

    def _min_curvature(self, d: np.ndarray) -> Tuple[float, np.ndarray]:
        return min_eigenpair(
            lambda X: self.cost.s_times(d, X) if X.ndim == 2 else d * X - self.cost.C @ X,
            self.n,
            lambda: self.cost.s_dense(d),
            dense_limit=self.config.dense_limit,
            tol=self.config.lanczos_tol,
        )

    def _escape_direction(self, Y: np.ndarray, G: np.ndarray, d: np.ndarray, v: np.ndarray,
                          rng_tag: int, seed: int) -> np.ndarray:
        """特征向量 v 与 Y 的各右奇异向量外积的切向投影中，取 ⟨S, VVᵀ⟩ 最小者"""
        _, _, Vt = np.linalg.svd(Y, full_matrices=False)
        best, best_hf = None, 0.0
        for w in Vt[::-1]:
            V = self.manifold.proju(Y, np.outer(v, w))
            nrm = np.linalg.norm(V)
            if nrm < _DEGENERATE_NORM:
                continue
            V = V / nrm
            hf = self.cost.hessian_form(d, V)
            if hf < best_hf:
                best, best_hf = V, hf
        if best is None:
            self.logger.debug("Degenerate escape direction, using a random tangent")
            best = self.manifold.random_tangent(Y, make_rng(seed, "escape", rng_tag))
        if self.manifold.inner(G, best) < 0:
            best = -best
        return best * math.sqrt(self.n)

    def _line_search(self, Y: np.ndarray, CY: np.ndarray, G: np.ndarray, gnorm2: float,
                     t0: float) -> Tuple[Optional[np.ndarray], float, float]:
        """Armijo 回溯：f(R(tG)) - f(Y) ≥ c·t·‖G‖²；失败返回 (None, 0, 0)"""
        cfg = self.config
        t = t0
        for _ in range(cfg.max_backtracks):
            gain = self.cost.tangent_step_increment(Y, CY, G, t)
            if not math.isfinite(gain):
                raise NonFiniteError("non-finite objective encountered during line search")
            if gain > 0 and gain >= cfg.armijo_c * t * gnorm2:
                return self.manifold.retr(Y, G, t), t, gain
            t *= cfg.backtrack
        return None, 0.0, 0.0

    def _try_escape(self, Y: np.ndarray, CY: np.ndarray, V: np.ndarray,
                    step: float) -> Tuple[Optional[np.ndarray], float, float]:
        """沿逃逸方向收缩；目标函数不下降才接受"""
        t = step
        for _ in range(self.config.max_backtracks):
            gain = self.cost.tangent_step_increment(Y, CY, V, t)
            if gain > 0:
                return self.manifold.retr(Y, V, t), t, gain
            t *= self.config.backtrack
        return None, 0.0, 0.0

    # ---- 主循环 ----

    def run(self, seed: int, initial: Optional[FactorPoint] = None) -> SolveResult:
        cfg = self.config
        start_time = time.time()

        if initial is not None:
            if initial.Y.shape != (self.n, self.r):
                raise DimensionMismatchError(
                    f"initial point has shape {initial.Y.shape}, expected {(self.n, self.r)}")
            Y = np.array(initial.Y)
        else:
            Y = self.manifold.random(make_rng(seed, "random_point"))

        f_acc = self.cost.value(Y)
        trace: Optional[List[TraceEntry]] = [] if cfg.record_trace else None
        CY, d, G, sy = self._evaluate(Y)

        iterations = 0
        escapes = 0
        escape_step = cfg.escape_step
        last_escape_value: Optional[float] = None
        min_curv = math.nan
        t_trial = 1.0 / self.scale
        status = SolveStatus.MAX_ITERS
        # 舍入下限：回溯停滞时按 ‖S(Y)Y‖_F ≤ grad_tol·(1+‖C‖)·√n 判定一阶临界
        stall_tol = cfg.grad_tol * math.sqrt(self.n)
        stalled = False

        while True:
            residual = sy / self.scale
            if residual <= cfg.grad_tol or (stalled and residual <= stall_tol):
                lam, v = self._min_curvature(d)
                min_curv = lam
                if lam >= -cfg.curvature_tol * self.scale:
                    status = SolveStatus.CONVERGED
                    if trace is not None:
                        trace.append(TraceEntry(iterations, f_acc, float(np.linalg.norm(G)), 0.0,
                                                TraceEvent.CONVERGED))
                    break
                if escapes >= cfg.max_escapes:
                    status = SolveStatus.ESCAPE_EXHAUSTED
                    break

                # 回到上次逃逸的起点附近：加倍扰动
                if last_escape_value is not None and f_acc <= last_escape_value + 1e-12 * self.scale * self.n:
                    escape_step *= 2.0
                else:
                    escape_step = cfg.escape_step
                last_escape_value = f_acc
                escapes += 1

                V = self._escape_direction(Y, G, d, v, escapes, seed)
                Y_new, t, gain = self._try_escape(Y, CY, V, escape_step)
                self.logger.debug(f"Escape {escapes}: lambda_min={lam:.3e}, step={t:.3e}, gain={gain:.3e}")
                if Y_new is None:
                    continue
                Y = Y_new
                f_acc += gain
                CY, d, G, sy = self._evaluate(Y)
                t_trial = 1.0 / self.scale
                stalled = False
                if trace is not None:
                    trace.append(TraceEntry(iterations, f_acc, float(np.linalg.norm(G)), t,
                                            TraceEvent.ESCAPE))
                continue

            if iterations >= cfg.max_iters:
                status = SolveStatus.MAX_ITERS
                break

            gnorm2 = float(np.sum(G * G))
            Y_new, t, gain = self._line_search(Y, CY, G, gnorm2, t_trial)
            if Y_new is None:
                iterations += 1
                if stalled and t_trial == 1.0 / self.scale:
                    # 默认步长重试仍失败：剩余预算只会重复同一次回溯
                    self.logger.warning(f"No ascent step at iteration {iterations} "
                                        f"(residual {residual:.3e}); budget exhausted")
                    iterations = cfg.max_iters
                    continue
                self.logger.debug(f"Line search stalled at iteration {iterations} "
                                  f"(residual {residual:.3e}); retrying from the default step")
                stalled = True
                t_trial = 1.0 / self.scale
                continue
            stalled = False

            CY_new, d_new, G_new, sy_new = self._evaluate(Y_new)
            t_trial = self._bb_step(Y_new - Y, G_new - G, t)
            Y, CY, d, G, sy = Y_new, CY_new, d_new, G_new, sy_new
            f_acc += gain
            iterations += 1
            if trace is not None:
                trace.append(TraceEntry(iterations, f_acc, float(np.linalg.norm(G)), t))

        objective = self.cost.value(Y)
        latency_ms = (time.time() - start_time) * 1000
        self.logger.debug(f"solve completed in {latency_ms:.2f}ms: status={status.value}, "
                          f"iterations={iterations}, escapes={escapes}, objective={objective:.6g}")
        return SolveResult(
            point=FactorPoint(Y),
            status=status,
            iterations=iterations,
            grad_residual=sy / self.scale,
            min_curvature_estimate=min_curv,
            objective_value=objective,
            c_opnorm=self.c_opnorm,
            escapes=escapes,
            seed=seed,
            trace=trace,
        )

    def _bb_step(self, s: np.ndarray, y: np.ndarray, t_prev: float) -> float:
        """上升方向的 BB 步长 ⟨s,s⟩/⟨s,-y⟩，裁剪到 [1e-6, 1e3]/(1+‖C‖)"""
        curvature = -float(np.sum(s * y))
        if curvature <= 0:
            return min(t_prev * 2.0, _BB_MAX / self.scale)
        t = float(np.sum(s * s)) / curvature
        return min(max(t, _BB_MIN / self.scale), _BB_MAX / self.scale)


def solve(C: CostMatrix, r: int, cfg: Optional[SolverConfig] = None, seed: int = 0,
          initial: Optional[FactorPoint] = None) -> SolveResult:
    """从 random_point(n, r, seed)（或给定初始点）出发求近似二阶临界点"""
    if not isinstance(C, CostMatrix):
        raise InvalidParameterError("C must be a CostMatrix")
    return RiemannianAscent(C, r, cfg).run(seed, initial)
