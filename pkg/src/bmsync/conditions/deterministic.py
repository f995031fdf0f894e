"""
确定性充分条件

Z2 同步：  ρ^Δ + (r+11)/(r-3)‖Δ‖ ≤ (r-3)/(r-1) λ₂
证明层面： (r-3)(λ₂ - ρ^Δ) - 2max(ρ^Δ, 0) - (r+11)‖Δ‖ ≥ 0
SBM：      d^z_min ≥ (r+11)/(r-3)(2‖A - EA‖ + p) + n(p-q)/(r-1)   （均值估计中心化）
           d^z_min ≥ (r+11)/(r-3)‖A - EA‖ + n(p-q)/(r-1)          （已知 p, q）
"""
from typing import Union

import numpy as np

from ..config.schema import Centering
from ..core.models import Graph, NoiseMatrix, SignVector
from ..core.reports import SbmDetermReport, Z2DetermReport
from ..errors import DimensionMismatchError, InvalidParameterError
from ..instances.sbm import expected_adjacency
from ..utils import spectral
from ..utils.logger import get_logger
from ..utils.validator import ensure_probability
from .functionals import algebraic_connectivity, dz_min, rho_delta

logger = get_logger(__name__)

# λ₂ 低于 CONNECTIVITY_RTOL·n 视为不连通
CONNECTIVITY_RTOL = 1e-10


def _disconnected_margin(margin: float, n: int) -> float:
    """不连通图不满足定理前提：margin 取严格负值"""
    return min(margin, -CONNECTIVITY_RTOL * max(n, 1))


def check_z2_determ(G: Graph, delta: NoiseMatrix, z: SignVector, r: int) -> Z2DetermReport:
    """
    评估确定性 Z2 条件，margin = rhs - lhs

    r = 3 只在 Δ = 0 时适用，此时条件化为 λ₂ > 0，报告 lhs = 0、rhs = λ₂。
    """
    n = G.n
    if delta.n != n or z.n != n:
        raise DimensionMismatchError(f"graph {n}, noise {delta.n}, truth {z.n} disagree")
    if r < 3:
        raise InvalidParameterError(f"the deterministic condition needs r >= 3, got {r}", field="r")
    if r == 3 and not delta.is_zero():
        raise InvalidParameterError("r = 3 is only covered when the noise is zero", field="r")

    lam2 = algebraic_connectivity(G)
    connected = lam2 > CONNECTIVITY_RTOL * n
    if not connected:
        lam2 = 0.0
    rho, _ = rho_delta(delta, z)
    dnorm = spectral.operator_norm(delta.entries)

    if r == 3:
        lhs, rhs = 0.0, lam2
        proof = 0.0 if connected else None
    else:
        lhs = rho + (r + 11.0) / (r - 3.0) * dnorm
        rhs = (r - 3.0) / (r - 1.0) * lam2
        proof = (r - 3.0) * (lam2 - rho) - 2.0 * max(rho, 0.0) - (r + 11.0) * dnorm

    margin = rhs - lhs
    if not connected:
        margin = _disconnected_margin(margin, n)
        logger.debug("Measurement graph is disconnected; condition not satisfied")

    return Z2DetermReport(
        lambda2=lam2,
        rho_delta=rho,
        delta_opnorm=dnorm,
        lhs=lhs,
        rhs=rhs,
        satisfied=margin >= 0,
        margin=margin,
        r=r,
        proof_margin=proof,
    )


def centered_adjacency(A: Graph, z: SignVector, p: float, q: float) -> np.ndarray:
    """A - EA，EA = (p-q)/2 zzᵀ + (p+q)/2 11ᵀ - pI"""
    return A.weights - expected_adjacency(A.n, z.as_float(), p, q)


def check_sbm_determ(A: Graph, z: SignVector, p: float, q: float, r: int,
                     variant: Union[Centering, str] = Centering.MEAN_ESTIMATE,
                     estimated: bool = False) -> SbmDetermReport:
    """
    评估确定性 SBM 条件，lhs = d^z_min，margin = lhs - rhs

    estimated=True 表示 (p, q) 是代入的估计值而非真实参数。
    """
    if A.n != z.n:
        raise DimensionMismatchError(f"graph has {A.n} vertices, truth has length {z.n}")
    if r < 4:
        raise InvalidParameterError(f"the SBM condition needs r >= 4, got {r}", field="r")
    ensure_probability(p, "p")
    ensure_probability(q, "q")
    if not q < p:
        raise InvalidParameterError(f"the SBM condition needs q < p, got p={p}, q={q}", field="q")
    try:
        variant = Centering(variant)
    except ValueError as e:
        raise InvalidParameterError(f"Unknown variant: {variant}", field="variant") from e

    n = A.n
    lhs, _ = dz_min(A, z)
    a_norm = spectral.operator_norm(centered_adjacency(A, z, p, q))
    ratio = (r + 11.0) / (r - 3.0)
    drift = n * (p - q) / (r - 1.0)
    if variant == Centering.MEAN_ESTIMATE:
        rhs = ratio * (2.0 * a_norm + p) + drift
    else:
        rhs = ratio * a_norm + drift

    margin = lhs - rhs
    return SbmDetermReport(
        dz_min=lhs,
        a_centered_opnorm=a_norm,
        lhs=lhs,
        rhs=rhs,
        satisfied=margin >= 0,
        margin=margin,
        variant=variant.value,
        r=r,
        estimated=estimated,
    )
