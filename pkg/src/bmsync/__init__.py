"""
bm-sync: Burer–Monteiro 低秩分解下的 Z2 同步与随机块模型实验工具
"""

__version__ = "1.0.0"
__author__ = "bm-sync Team"

from .certificates import certify, check_exact_recovery
from .conditions import check_sbm_determ, check_z2_determ, evaluate_instance
from .core.models import CostMatrix, FactorPoint, ProblemInstance, SignVector
from .experiments import run_sweep, run_trial
from .instances import gen_er_bernoulli, gen_gaussian, gen_sbm, generate
from .solver import multi_start, solve

__all__ = [
    "certify",
    "check_exact_recovery",
    "check_sbm_determ",
    "check_z2_determ",
    "evaluate_instance",
    "CostMatrix",
    "FactorPoint",
    "ProblemInstance",
    "SignVector",
    "run_sweep",
    "run_trial",
    "gen_er_bernoulli",
    "gen_gaussian",
    "gen_sbm",
    "generate",
    "multi_start",
    "solve",
]
