"""
临界性与全局最优性证书
"""
from typing import Tuple

import numpy as np

from ..core.models import CostMatrix, FactorPoint
from ..core.reports import CriticalityReport
from ..errors import DimensionMismatchError
from ..manifold.oblique import BurerMonteiroCost
from ..utils.logger import get_logger
from ..utils.spectral import DENSE_LIMIT, LANCZOS_TOL, min_eigenpair, operator_norm

logger = get_logger(__name__)

# 默认相对容差（与求解器的曲率容差一致）
DEFAULT_TOL_SCALE = 1e-8


def _dual_quantities(C: CostMatrix, Y: FactorPoint) -> Tuple[BurerMonteiroCost, np.ndarray, np.ndarray]:
    if C.n != Y.n:
        raise DimensionMismatchError(f"cost is {C.n}×{C.n} but Y has {Y.n} rows")
    cost = BurerMonteiroCost(C.entries)
    _, CY, d = cost.value_and_cy(Y.Y)
    return cost, CY, d


def certify(C: CostMatrix, Y: FactorPoint, tol_scale: float = DEFAULT_TOL_SCALE,
            dense_limit: int = DENSE_LIMIT) -> CriticalityReport:
    """
    计算 S(Y) 的最小特征值与 ‖S(Y)Y‖_F，按 tol_scale·(1+‖C‖_op) 判定

    S(Y)Y ≈ 0 且 S(Y) ⪰ -tol 时 X = YYᵀ 是 SDP 松弛的最优解（对偶证书）。
    is_second_order 用 λ_min(S(Y)) 判定，是切空间二阶条件的充分条件。
    """
    cost, CY, d = _dual_quantities(C, Y)
    c_opnorm = operator_norm(C.entries, dense_limit, LANCZOS_TOL)
    scale = 1.0 + c_opnorm
    tol = tol_scale * scale

    s_y = float(np.linalg.norm(d[:, None] * Y.Y - CY))
    s_min, _ = min_eigenpair(
        lambda X: cost.s_times(d, X) if X.ndim == 2 else d * X - cost.C @ X,
        C.n,
        lambda: cost.s_dense(d),
        dense_limit=dense_limit,
    )

    first = s_y <= tol
    second = s_min >= -tol
    report = CriticalityReport(
        grad_residual=s_y / scale,
        s_min_eig=s_min,
        s_y_residual=s_y,
        is_first_order=first,
        is_second_order=second,
        is_global=first and second,
        tolerance=tol,
        c_opnorm=c_opnorm,
    )
    logger.debug(f"certify: ‖S(Y)Y‖={s_y:.3e}, λ_min(S)={s_min:.3e}, tol={tol:.3e}, "
                 f"global={report.is_global}")
    return report


def sdp_value_bound(C: CostMatrix, Y: FactorPoint) -> float:
    """对偶目标 tr(ddiag(CYYᵀ)) = ⟨C, YYᵀ⟩；S(Y) ⪰ 0 时是 SDP 最优值的上界"""
    _, _, d = _dual_quantities(C, Y)
    return float(np.sum(d))
