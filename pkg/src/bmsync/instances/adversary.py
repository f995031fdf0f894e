"""
单调对手扰动：C′ = C + Δ⁺，Δ⁺_ij z_i z_j ≥ 0
"""
import numpy as np

from ..core.models import CostMatrix, ProblemInstance, SignVector
from ..errors import InvalidParameterError, MissingTruthError
from ..utils.logger import get_logger
from ..utils.rng import make_rng
from .base import check_seed, symmetric_from_upper, upper_pairs

logger = get_logger(__name__)


def monotone_perturbation(z: SignVector, strength: float, density: float,
                          rng: np.random.Generator) -> np.ndarray:
    """
    在随机选取的 round(density·m) 个元素对上放置 s_ij·z_i z_j，s_ij ~ U[0, strength]

    返回对称零对角矩阵；符号条件按构造成立。
    """
    n = z.n
    m = n * (n - 1) // 2
    k = int(round(density * m))
    values = np.zeros(m, dtype=np.float64)
    if k and strength > 0:
        chosen = np.sort(rng.choice(m, size=k, replace=False))
        magnitudes = rng.uniform(0.0, strength, size=k)
        iu = upper_pairs(n)
        zz = (z.entries[iu[0]] * z.entries[iu[1]]).astype(np.float64)
        values[chosen] = magnitudes * zz[chosen]
    return symmetric_from_upper(n, values)


def apply_monotone_adversary(inst: ProblemInstance, strength: float, density: float,
                             seed: int) -> ProblemInstance:
    """返回代价矩阵为 C + Δ⁺ 的新实例；其余字段保持不变"""
    if inst.truth is None:
        raise MissingTruthError("monotone adversary requires the ground truth", field="truth")
    if not strength >= 0:
        raise InvalidParameterError(f"strength must be nonnegative, got {strength}", field="strength")
    if not 0.0 <= density <= 1.0:
        raise InvalidParameterError(f"density must be in [0, 1], got {density}", field="density")
    seed = check_seed(seed)

    meta = {"adversary": {"strength": float(strength), "density": float(density), "seed": seed}}
    if strength == 0 or density == 0:
        return inst.with_cost(inst.cost, **meta)

    delta_plus = monotone_perturbation(inst.truth, strength, density, make_rng(seed, "adversary"))
    perturbed = inst.cost.entries + delta_plus
    logger.debug(f"Adversary perturbed {int(np.count_nonzero(np.triu(delta_plus, 1)))} pairs "
                 f"(strength={strength}, density={density})")
    return inst.with_cost(CostMatrix(perturbed), **meta)
