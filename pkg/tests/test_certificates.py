"""
证书、恢复判定、oracle 与矩阵恒等式
"""
import numpy as np
import pytest

from bmsync.certificates import (
    MAX_BRUTE_FORCE_N,
    brute_force_opt,
    certify,
    check_exact_recovery,
    correlation,
    expected_direction_matrix,
    extract_labels,
    monte_carlo_direction_matrix,
    q_decompose,
    q_tilde_bound,
    sdp_value_bound,
    single_flip_gains,
)
from bmsync.core.models import CostMatrix, FactorPoint, SignVector
from bmsync.errors import DimensionMismatchError, InvalidParameterError
from bmsync.instances import gen_gaussian
from bmsync.manifold import objective, random_point
from bmsync.solver import solve


def _rank_one(z: SignVector, r: int = 3) -> FactorPoint:
    u = np.zeros(r)
    u[0] = 1.0
    return FactorPoint.from_rank_one(z, u)


class TestCertify:
    def test_truth_is_certified_global(self, noiseless_cost, signs):
        report = certify(noiseless_cost, _rank_one(signs))
        assert report.is_first_order
        assert report.is_second_order
        assert report.is_global
        assert report.s_y_residual == pytest.approx(0.0, abs=1e-12)

    def test_random_point_not_first_order(self, gaussian_instance):
        report = certify(gaussian_instance.cost, random_point(gaussian_instance.n, 4, seed=0))
        assert not report.is_first_order
        assert not report.is_global

    def test_saddle_is_first_order_only(self, noiseless_cost, signs):
        wrong = signs.entries.copy()
        wrong[:4] *= -1
        report = certify(noiseless_cost, _rank_one(SignVector(wrong)))
        assert report.is_first_order
        assert not report.is_second_order
        assert report.s_min_eig == pytest.approx(-signs.n)

    def test_dual_bound_equals_objective(self, gaussian_instance):
        Y = random_point(gaussian_instance.n, 3, seed=1)
        assert sdp_value_bound(gaussian_instance.cost, Y) == pytest.approx(
            objective(gaussian_instance.cost, Y))

    def test_dimension_mismatch(self, noiseless_cost):
        with pytest.raises(DimensionMismatchError):
            certify(noiseless_cost, random_point(3, 2, seed=0))


class TestRecovery:
    def test_exact_recovery_up_to_rotation_and_sign(self, signs):
        rng = np.random.default_rng(0)
        Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        Y = FactorPoint(_rank_one(signs, 4).Y @ Q)
        assert check_exact_recovery(Y, signs).is_exact
        flipped = SignVector(-signs.entries)
        report = check_exact_recovery(Y, flipped)
        assert report.is_exact
        assert report.correlation == 1.0
        assert report.relative_gap == pytest.approx(0.0, abs=1e-12)

    def test_random_point_not_exact(self, signs):
        report = check_exact_recovery(random_point(signs.n, 3, seed=2), signs)
        assert not report.is_exact
        assert report.rank1_gap > 0

    def test_labels_normalized(self, signs):
        labels = extract_labels(_rank_one(SignVector(-signs.entries)))
        assert labels.entries[0] == 1
        assert labels.equals_up_to_sign(signs)

    def test_label_sign_equivariance(self):
        """行翻号 diag(s)Y 的标签等于 s∘labels（整体符号除外）"""
        for seed in range(10):
            Y = random_point(12, 3, seed=seed)
            labels = extract_labels(Y)
            s = np.where(np.random.default_rng(seed).random(12) < 0.5, -1, 1)
            flipped = extract_labels(FactorPoint(s[:, None] * Y.Y))
            expected = SignVector((s * labels.entries).astype(np.int8))
            assert flipped.equals_up_to_sign(expected)
            assert flipped.entries[0] == 1

    def test_tied_singular_values_deterministic(self):
        Y = FactorPoint(np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]))
        first = extract_labels(Y)
        assert first == extract_labels(Y)
        assert first.entries[0] == 1
        # 相同的行得到相同的标签
        assert first.entries[0] == first.entries[2]
        assert first.entries[1] == first.entries[3]

    def test_correlation(self):
        a = SignVector(np.array([1, 1, -1, -1], dtype=np.int8))
        b = SignVector(np.array([1, -1, -1, -1], dtype=np.int8))
        assert correlation(a, b) == pytest.approx(0.5)
        assert correlation(a, SignVector(-a.entries)) == 1.0

    def test_length_mismatch(self, signs):
        with pytest.raises(DimensionMismatchError):
            check_exact_recovery(random_point(3, 2, seed=0), signs)


class TestOracle:
    def test_rank_one_value(self):
        z = SignVector(np.array([1, -1, -1, 1], dtype=np.int8))
        zf = z.as_float()
        labels, value = brute_force_opt(CostMatrix.from_matrix(np.outer(zf, zf)))
        assert value == pytest.approx(12.0)
        assert labels.equals_up_to_sign(z)
        assert labels.entries[0] == 1

    def test_matches_solver_on_small_instance(self):
        inst = gen_gaussian(10, 0.2, seed=4)
        labels, value = brute_force_opt(inst.cost)
        assert labels.equals_up_to_sign(inst.truth)
        assert value == pytest.approx(objective(inst.cost, _rank_one(inst.truth)))

    def test_tie_breaks_lexicographically(self):
        labels, value = brute_force_opt(CostMatrix.zeros(5))
        assert value == 0.0
        assert np.all(labels.entries == 1)

    @pytest.mark.slow
    def test_certified_solutions_against_exhaustive_search(self):
        """
        证书成立时 ⟨C, YYᵀ⟩ 是 SDP 最优值，不小于 ±1 最优值；
        Y 秩一时两者相等且标签一致
        """
        costs = [gen_gaussian(10, 0.3 + 0.004 * k, seed=k).cost for k in range(25)]
        for k in range(25):
            A = np.random.default_rng(500 + k).standard_normal((10, 10))
            costs.append(CostMatrix.from_matrix((A + A.T) / 2))

        certified = rank_one = 0
        for k, C in enumerate(costs):
            labels, value = brute_force_opt(C)
            result = solve(C, 10, seed=k)
            if not certify(C, result.point).is_global:
                continue
            certified += 1
            assert result.objective_value >= value - 1e-8 * max(1.0, abs(value))
            if check_exact_recovery(result.point, labels).is_exact:
                rank_one += 1
                assert result.objective_value == pytest.approx(value, rel=1e-6, abs=1e-6)
                assert extract_labels(result.point).equals_up_to_sign(labels)
        assert certified >= 45
        assert rank_one >= 15

    def test_size_limit(self):
        with pytest.raises(InvalidParameterError):
            brute_force_opt(CostMatrix.zeros(MAX_BRUTE_FORCE_N + 1))

    def test_single_flip_gains(self, gaussian_instance):
        x = gaussian_instance.truth
        gains = single_flip_gains(gaussian_instance.cost, x)
        C = gaussian_instance.cost
        base = float(x.as_float() @ C.entries @ x.as_float())
        for i in (0, 7, 19):
            xi = x.flipped(i).as_float()
            assert gains[i] == pytest.approx(float(xi @ C.entries @ xi) - base)


class TestIdentities:
    def test_two_point_example(self):
        Y = FactorPoint(np.array([[1.0, 0.0], [0.0, 1.0]]))
        Q, _, _ = q_decompose(Y)
        assert Q[0, 1] == pytest.approx(1.0)
        assert Q[0, 0] == 0.0

    def test_q_split(self):
        Y = random_point(12, 4, seed=3)
        Q, a, Q_tilde = q_decompose(Y)
        np.testing.assert_allclose(Q, a[:, None] + a[None, :] + Q_tilde, atol=1e-12)
        np.testing.assert_allclose(Q, Q.T)

    def test_nuclear_bound(self):
        for seed in range(5):
            nuclear, bound = q_tilde_bound(random_point(20, 3, seed=seed))
            assert nuclear <= bound + 1e-9

    @pytest.mark.slow
    def test_nuclear_bound_grid(self):
        for k in range(1000):
            n = 5 + k % 46
            r = 2 + (k // 46) % 9
            nuclear, bound = q_tilde_bound(random_point(n, r, seed=k))
            assert nuclear <= bound + 1e-9, (n, r, k)

    def test_expected_direction_entries(self):
        Y = random_point(6, 5, seed=1)
        M = expected_direction_matrix(Y, 5)
        G = Y.gram()
        expected = 5 - 2 + G ** 2
        off = ~np.eye(6, dtype=bool)
        np.testing.assert_allclose(M[off], expected[off], atol=1e-12)

    def test_monte_carlo_agrees(self):
        Y = random_point(5, 4, seed=2)
        exact = expected_direction_matrix(Y, 4)
        estimate = monte_carlo_direction_matrix(Y, 4, samples=200_000, seed=0)
        off = ~np.eye(5, dtype=bool)
        np.testing.assert_allclose(estimate[off], exact[off], atol=0.1)

    def test_rank_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            expected_direction_matrix(random_point(4, 3, seed=0), 5)
