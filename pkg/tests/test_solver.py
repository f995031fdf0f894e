"""
黎曼梯度上升与多起点
"""
import numpy as np
import pytest

from bmsync.certificates import certify, check_exact_recovery
from bmsync.conditions import evaluate_instance
from bmsync.config.schema import SolverConfig
from bmsync.core.models import CostMatrix, FactorPoint
from bmsync.core.reports import SolveStatus, TraceEvent
from bmsync.errors import DimensionMismatchError, InvalidParameterError
from bmsync.instances import apply_monotone_adversary, gen_er_bernoulli, gen_gaussian, gen_sbm
from bmsync.manifold import objective, random_point
from bmsync.solver import default_rank, multi_start, select_best, solve, start_seed


def _random_cost(n: int, seed: int) -> CostMatrix:
    A = np.random.default_rng(seed).standard_normal((n, n))
    return CostMatrix.from_matrix((A + A.T) / 2)


class TestDefaults:
    @pytest.mark.parametrize("n, expected", [(2, 4), (16, 4), (17, 5), (1000, 10), (4096, 12)])
    def test_default_rank(self, n, expected):
        assert default_rank(n) == expected

    def test_rank_below_two_rejected(self, noiseless_cost):
        with pytest.raises(InvalidParameterError):
            solve(noiseless_cost, 1)

    def test_initial_point_shape_checked(self, noiseless_cost):
        with pytest.raises(DimensionMismatchError):
            solve(noiseless_cost, 3, initial=random_point(noiseless_cost.n, 4, seed=0))


class TestSolve:
    def test_noiseless_recovers_truth(self, noiseless_cost, signs, solver_config):
        result = solve(noiseless_cost, 4, solver_config, seed=1)
        assert result.status == SolveStatus.CONVERGED
        n = signs.n
        assert result.objective_value == pytest.approx(n * (n - 1), rel=1e-8)
        assert check_exact_recovery(result.point, signs).is_exact

    def test_deterministic_given_seed(self, gaussian_instance, solver_config):
        a = solve(gaussian_instance.cost, 4, solver_config, seed=3)
        b = solve(gaussian_instance.cost, 4, solver_config, seed=3)
        assert a.point == b.point
        assert a.iterations == b.iterations

    def test_objective_not_below_start(self, gaussian_instance, solver_config):
        start = random_point(gaussian_instance.n, 4, seed=5)
        result = solve(gaussian_instance.cost, 4, solver_config, seed=5)
        assert result.objective_value >= objective(gaussian_instance.cost, start) - 1e-9

    def test_converged_point_certifies(self, gaussian_instance, solver_config):
        result = solve(gaussian_instance.cost, 5, solver_config, seed=2)
        assert result.converged
        report = certify(gaussian_instance.cost, result.point)
        assert report.is_first_order
        assert report.is_second_order
        assert report.is_global

    def test_zero_cost_converges_immediately(self, solver_config):
        result = solve(CostMatrix.zeros(6), 3, solver_config, seed=0)
        assert result.status == SolveStatus.CONVERGED
        assert result.iterations == 0
        assert result.objective_value == 0.0

    def test_max_iters_reported(self, gaussian_instance):
        cfg = SolverConfig(max_iters=1, grad_tol=1e-14)
        result = solve(gaussian_instance.cost, 4, cfg, seed=0)
        assert result.status == SolveStatus.MAX_ITERS
        assert result.iterations <= 1

    def test_trace_recorded(self, gaussian_instance):
        cfg = SolverConfig(max_iters=5000, record_trace=True)
        result = solve(gaussian_instance.cost, 4, cfg, seed=4)
        assert result.trace
        assert result.trace[-1].event == TraceEvent.CONVERGED
        objectives = [entry.objective for entry in result.trace]
        assert all(b >= a - 1e-9 for a, b in zip(objectives, objectives[1:]))

    def test_escapes_saddle(self, noiseless_cost, signs, solver_config):
        """从鞍点出发（两簇标签相反的错误对齐）仍能到达全局最优"""
        n = signs.n
        wrong = signs.entries.astype(np.float64).copy()
        wrong[: n // 2] *= -1
        Y0 = np.zeros((n, 3))
        Y0[:, 0] = wrong
        result = solve(noiseless_cost, 3, solver_config, seed=0, initial=FactorPoint(Y0))
        assert result.converged
        assert result.escapes >= 1
        assert result.objective_value == pytest.approx(n * (n - 1), rel=1e-8)

    def test_random_costs_reach_convergence(self):
        """舍入噪声不会让回溯停在预算之前"""
        cfg = SolverConfig()
        converged = 0
        for seed in range(50):
            C = _random_cost(10, seed)
            result = solve(C, 10, cfg, seed=seed)
            if result.converged:
                converged += 1
                assert result.grad_residual <= cfg.grad_tol * np.sqrt(10)
            else:
                assert result.status != SolveStatus.MAX_ITERS or result.iterations >= cfg.max_iters
        assert converged >= 45


class TestMultiStart:
    def test_start_seed(self):
        assert start_seed(9, 0) == 9
        assert start_seed(9, 1) != start_seed(9, 2)

    def test_single_start_matches_solve(self, gaussian_instance, solver_config):
        ms = multi_start(gaussian_instance.cost, 4, solver_config, starts=1, seed=6)
        single = solve(gaussian_instance.cost, 4, solver_config, seed=6)
        assert ms.best.point == single.point

    def test_best_has_highest_objective(self, sbm_instance, solver_config):
        ms = multi_start(sbm_instance.cost, 4, solver_config, starts=3, seed=2)
        assert len(ms.results) == 3
        pool = [r.objective_value for r in ms.results if r.converged] or [r.objective_value for r in ms.results]
        assert ms.best.objective_value >= max(pool) - 1e-9

    def test_threads_do_not_change_result(self, gaussian_instance, solver_config):
        serial = multi_start(gaussian_instance.cost, 4, solver_config, starts=3, seed=8)
        threaded = multi_start(gaussian_instance.cost, 4, solver_config, starts=3, seed=8, jobs=3)
        assert serial.best_index == threaded.best_index
        for a, b in zip(serial.results, threaded.results):
            assert a.point == b.point

    def test_select_best_prefers_lowest_index_on_tie(self, noiseless_cost, solver_config):
        res = solve(noiseless_cost, 3, solver_config, seed=1)
        assert select_best([res, res, res]) == 0

    def test_starts_must_be_positive(self, noiseless_cost):
        with pytest.raises(InvalidParameterError):
            multi_start(noiseless_cost, 3, starts=0)


@pytest.mark.slow
def test_gaussian_below_threshold_recovers():
    inst = gen_gaussian(200, 1.0, seed=31)
    result = solve(inst.cost, 5, seed=0)
    assert result.converged
    assert check_exact_recovery(result.point, inst.truth).is_exact


@pytest.mark.slow
def test_sbm_dense_regime_recovers():
    inst = gen_sbm(200, 0.5, 0.05, seed=2)
    result = multi_start(inst.cost, 8, starts=2, seed=1)
    assert check_exact_recovery(result.best.point, inst.truth).is_exact


def _condition_instances():
    """确定性条件成立的高斯与 ER 实例"""
    candidates = [gen_gaussian(30, sigma, seed=seed) for seed in range(8) for sigma in (0.05, 0.1)]
    candidates += [gen_er_bernoulli(30, 0.5, 1.0, seed=seed) for seed in range(8)]
    return [inst for inst in candidates if evaluate_instance(inst, 5).satisfied]


@pytest.mark.slow
class TestBenignLandscape:
    def test_condition_implies_recovery_from_every_start(self):
        instances = _condition_instances()
        assert len(instances) >= 10
        for inst in instances:
            ms = multi_start(inst.cost, 5, starts=5, seed=inst.seed)
            for result in ms.results:
                assert check_exact_recovery(result.point, inst.truth).is_exact

    def test_monotone_adversary_keeps_recovery(self):
        for inst in _condition_instances()[:8]:
            for adversary_seed in range(3):
                helped = apply_monotone_adversary(inst, 1.0, 0.2, seed=adversary_seed)
                result = solve(helped.cost, 5, seed=adversary_seed)
                assert result.converged
                assert check_exact_recovery(result.point, inst.truth).is_exact
