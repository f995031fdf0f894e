"""
证书、恢复判定与小规模 oracle
"""
from .criticality import DEFAULT_TOL_SCALE, certify, sdp_value_bound
from .identities import (
    centered_part,
    expected_direction_matrix,
    monte_carlo_direction_matrix,
    q_decompose,
    q_tilde_bound,
)
from .oracle import MAX_BRUTE_FORCE_N, brute_force_opt, single_flip_gains
from .recovery import check_exact_recovery, correlation, extract_labels

__all__ = [
    "DEFAULT_TOL_SCALE",
    "certify",
    "sdp_value_bound",
    "centered_part",
    "expected_direction_matrix",
    "monte_carlo_direction_matrix",
    "q_decompose",
    "q_tilde_bound",
    "MAX_BRUTE_FORCE_N",
    "brute_force_opt",
    "single_flip_gains",
    "check_exact_recovery",
    "correlation",
    "extract_labels",
]
