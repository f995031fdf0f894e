"""
恢复条件：图/噪声泛函、确定性条件与渐近阈值
"""
from .asymptotic import (
    bern_condition,
    bern_corollary_condition,
    gaussian_proof_condition,
    gaussian_sigma_threshold,
    sbm_condition,
    sbm_corollary_condition,
    sbm_optimal_threshold,
)
from .deterministic import centered_adjacency, check_sbm_determ, check_z2_determ
from .evaluate import evaluate_instance
from .functionals import (
    algebraic_connectivity,
    concentration_ratio,
    dz_min,
    local_stability,
    operator_norm,
    rho_delta,
    sbm_local_stability,
)

__all__ = [
    "bern_condition",
    "bern_corollary_condition",
    "gaussian_proof_condition",
    "gaussian_sigma_threshold",
    "sbm_condition",
    "sbm_corollary_condition",
    "sbm_optimal_threshold",
    "centered_adjacency",
    "check_sbm_determ",
    "check_z2_determ",
    "evaluate_instance",
    "algebraic_connectivity",
    "concentration_ratio",
    "dz_min",
    "local_stability",
    "operator_norm",
    "rho_delta",
    "sbm_local_stability",
]
