"""
问题实例：随机模型生成、代价矩阵构造、单调对手与文件存取
"""
from .adversary import apply_monotone_adversary, monotone_perturbation
from .base import BaseGenerator
from .costs import (
    COMPLETE,
    MEASURED,
    build_sbm_cost,
    effective_graph,
    measurement_decomposition,
    raw_instance,
)
from .er_bernoulli import ErBernoulliGenerator, gen_er_bernoulli
from .factory import InstanceFactory, generate
from .gaussian import GaussianGenerator, gen_gaussian
from .sbm import SbmGenerator, expected_adjacency, gen_sbm
from .storage import load_factor, load_instance, save_factor, save_instance

__all__ = [
    "apply_monotone_adversary",
    "monotone_perturbation",
    "BaseGenerator",
    "COMPLETE",
    "MEASURED",
    "build_sbm_cost",
    "effective_graph",
    "measurement_decomposition",
    "raw_instance",
    "ErBernoulliGenerator",
    "gen_er_bernoulli",
    "InstanceFactory",
    "generate",
    "GaussianGenerator",
    "gen_gaussian",
    "SbmGenerator",
    "expected_adjacency",
    "gen_sbm",
    "load_factor",
    "load_instance",
    "save_factor",
    "save_instance",
]
