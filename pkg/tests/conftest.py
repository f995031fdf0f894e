"""
共享测试夹具
"""
import numpy as np
import pytest

from bmsync.config.schema import SolverConfig, SweepSpec
from bmsync.core.models import CostMatrix, SignVector
from bmsync.instances import gen_er_bernoulli, gen_gaussian, gen_sbm


@pytest.fixture
def solver_config() -> SolverConfig:
    """小规模实例用的求解器配置"""
    return SolverConfig(max_iters=5000, grad_tol=1e-9, curvature_tol=1e-8)


@pytest.fixture
def signs() -> SignVector:
    return SignVector(np.array([1, -1, 1, 1, -1, -1, 1, -1], dtype=np.int8))


@pytest.fixture
def noiseless_cost(signs) -> CostMatrix:
    """C = zzᵀ - I"""
    z = signs.as_float()
    C = np.outer(z, z)
    np.fill_diagonal(C, 0.0)
    return CostMatrix(C)


@pytest.fixture
def gaussian_instance():
    return gen_gaussian(n=40, sigma=0.3, seed=11)


@pytest.fixture
def er_instance():
    return gen_er_bernoulli(n=40, p=0.6, delta=0.9, seed=5)


@pytest.fixture
def sbm_instance():
    return gen_sbm(n=60, p=0.8, q=0.1, seed=3)


@pytest.fixture
def small_sweep() -> SweepSpec:
    """两个单元、每单元两次试验的高斯扫描"""
    return SweepSpec(
        name="tiny",
        model={"model": "gaussian", "n": 20},
        grid={"sigma": [0.0, 0.2]},
        trials_per_cell=2,
        r=4,
        master_seed=17,
        solver=SolverConfig(max_iters=3000),
    )
