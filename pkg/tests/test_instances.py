"""
实例生成、代价构造、单调对手与文件存取
"""
import json

import numpy as np
import pytest

from bmsync.config.schema import Centering, GaussianParams, SbmParams
from bmsync.core.models import Graph, SignVector
from bmsync.errors import (
    InvalidParameterError,
    InvariantViolationError,
    MalformedFileError,
    MissingTruthError,
    StorageError,
)
from bmsync.instances import (
    COMPLETE,
    MEASURED,
    GaussianGenerator,
    InstanceFactory,
    apply_monotone_adversary,
    effective_graph,
    gen_er_bernoulli,
    gen_gaussian,
    gen_sbm,
    generate,
    load_factor,
    load_instance,
    measurement_decomposition,
    monotone_perturbation,
    raw_instance,
    save_factor,
    save_instance,
)
from bmsync.manifold import random_point
from bmsync.utils.rng import make_rng


def _offdiag_outer(z: SignVector) -> np.ndarray:
    zf = z.as_float()
    M = np.outer(zf, zf)
    np.fill_diagonal(M, 0.0)
    return M


class TestGaussian:
    def test_same_seed_same_instance(self):
        assert gen_gaussian(30, 0.5, seed=4) == gen_gaussian(30, 0.5, seed=4)

    def test_different_seed_differs(self):
        a = gen_gaussian(30, 0.5, seed=4)
        b = gen_gaussian(30, 0.5, seed=5)
        assert not np.array_equal(a.cost.entries, b.cost.entries)

    def test_noiseless_cost_is_rank_one(self):
        inst = gen_gaussian(25, 0.0, seed=1)
        np.testing.assert_array_equal(inst.cost.entries, _offdiag_outer(inst.truth))

    def test_decomposition_recovers_noise(self, gaussian_instance):
        graph, noise = measurement_decomposition(gaussian_instance, COMPLETE)
        assert graph == Graph.complete(gaussian_instance.n)
        expected = gaussian_instance.cost.entries - _offdiag_outer(gaussian_instance.truth)
        np.testing.assert_allclose(noise.entries, expected)

    def test_negative_sigma_rejected(self):
        with pytest.raises(InvalidParameterError):
            gen_gaussian(10, -0.1, seed=0)

    def test_sigma_scale_view(self):
        params = GaussianParams(n=100, sigma=np.sqrt(100 / (2 * np.log(100))))
        assert params.sigma_scale == pytest.approx(1.0)


class TestErBernoulli:
    def test_empty_graph_gives_zero_cost(self):
        inst = gen_er_bernoulli(20, 0.0, 0.5, seed=2)
        assert inst.graph.edge_count() == 0
        assert not np.any(inst.cost.entries)

    def test_clean_measurements_match_truth(self):
        inst = gen_er_bernoulli(30, 0.5, 1.0, seed=8)
        expected = inst.graph.weights * _offdiag_outer(inst.truth)
        np.testing.assert_array_equal(inst.cost.entries, expected)
        _, noise = measurement_decomposition(inst, MEASURED)
        assert noise.is_zero()

    def test_cost_supported_on_graph(self, er_instance):
        off_graph = er_instance.graph.weights == 0
        assert not np.any(er_instance.cost.entries[off_graph])
        assert set(np.unique(er_instance.cost.entries)) <= {-1.0, 0.0, 1.0}

    def test_complete_decomposition_uses_scaled_graph(self, er_instance):
        graph, _ = measurement_decomposition(er_instance, COMPLETE)
        params = er_instance.params
        assert graph.weights[0, 1] == pytest.approx(params.delta * params.p)

    def test_probability_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            gen_er_bernoulli(10, 1.5, 0.5, seed=0)


class TestSbm:
    def test_truth_is_balanced(self, sbm_instance):
        assert sbm_instance.truth.is_balanced()
        assert sbm_instance.truth.balanced

    def test_mean_estimate_centering(self, sbm_instance):
        A = sbm_instance.graph.weights
        shift = A.sum() / sbm_instance.n ** 2
        expected = A - shift
        np.fill_diagonal(expected, 0.0)
        np.testing.assert_allclose(sbm_instance.cost.entries, expected)

    def test_known_pq_centering(self):
        inst = gen_sbm(40, 0.7, 0.2, centering=Centering.KNOWN_PQ, seed=9)
        expected = inst.graph.weights - 0.45
        np.fill_diagonal(expected, 0.0)
        np.testing.assert_allclose(inst.cost.entries, expected)

    def test_q_not_below_p_rejected(self):
        with pytest.raises(InvalidParameterError):
            gen_sbm(10, 0.2, 0.2, seed=0)

    def test_odd_n_rejected(self):
        with pytest.raises(InvalidParameterError):
            gen_sbm(11, 0.5, 0.1, seed=0)

    def test_derived_views(self):
        params = SbmParams(n=1000, p=16 * np.log(1000) / 1000, q=4 * np.log(1000) / 1000)
        assert params.a == pytest.approx(16.0)
        assert params.b == pytest.approx(4.0)


class TestFactory:
    def test_generate_from_dict(self):
        inst = generate({"model": "gaussian", "n": 12, "sigma": 0.1}, seed=3)
        assert inst.n == 12
        assert inst == gen_gaussian(12, 0.1, seed=3)

    def test_unknown_model(self):
        with pytest.raises(InvalidParameterError):
            generate({"model": "ising", "n": 12}, seed=0)

    def test_seed_must_be_unsigned(self):
        with pytest.raises(InvalidParameterError):
            gen_gaussian(10, 0.1, seed=-1)

    def test_register_generator(self, monkeypatch):
        monkeypatch.setattr(InstanceFactory, "_registry", dict(InstanceFactory._registry))

        class TaggedGaussian(GaussianGenerator):
            def sample(self, seed):
                inst = super().sample(seed)
                return inst.with_cost(inst.cost, tagged=True)

        InstanceFactory.register("gaussian", TaggedGaussian)
        inst = generate({"model": "gaussian", "n": 6, "sigma": 0.1}, seed=0)
        assert inst.metadata["tagged"] is True
        assert inst.cost == gen_gaussian(6, 0.1, seed=0).cost
        assert InstanceFactory.available_models() == ["erbern", "gaussian", "sbm"]


class TestAdversary:
    def test_perturbation_is_monotone(self, gaussian_instance):
        out = apply_monotone_adversary(gaussian_instance, strength=2.0, density=0.2, seed=7)
        delta_plus = out.cost.entries - gaussian_instance.cost.entries
        assert np.all(delta_plus * _offdiag_outer(gaussian_instance.truth) >= -1e-12)
        assert out.truth == gaussian_instance.truth
        assert out.metadata["adversary"]["density"] == 0.2

    def test_number_of_perturbed_pairs(self):
        z = SignVector(np.array([1, -1] * 20, dtype=np.int8))
        delta_plus = monotone_perturbation(z, 1.0, 0.2, make_rng(0, "adversary"))
        m = 40 * 39 // 2
        assert np.count_nonzero(np.triu(delta_plus, 1)) == round(0.2 * m)
        np.testing.assert_array_equal(delta_plus, delta_plus.T)

    def test_zero_strength_keeps_cost(self, gaussian_instance):
        out = apply_monotone_adversary(gaussian_instance, 0.0, 0.5, seed=1)
        assert out.cost == gaussian_instance.cost

    def test_deterministic(self, sbm_instance):
        a = apply_monotone_adversary(sbm_instance, 1.0, 0.3, seed=21)
        b = apply_monotone_adversary(sbm_instance, 1.0, 0.3, seed=21)
        assert a.cost == b.cost

    def test_requires_truth(self):
        inst = raw_instance(np.zeros((4, 4)))
        with pytest.raises(MissingTruthError):
            apply_monotone_adversary(inst, 1.0, 0.5, seed=0)

    def test_effective_graph(self, signs):
        n = signs.n
        delta_plus = 0.5 * _offdiag_outer(signs)
        graph = effective_graph(Graph.empty(n), delta_plus, signs)
        np.testing.assert_allclose(graph.weights, 0.5 * (np.ones((n, n)) - np.eye(n)))
        with pytest.raises(InvariantViolationError):
            effective_graph(Graph.empty(n), -delta_plus, signs)


class TestRawInstance:
    def test_asymmetric_input_rejected(self):
        C = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(InvariantViolationError):
            raw_instance(C)

    def test_diagonal_is_zeroed(self):
        inst = raw_instance(np.ones((3, 3)))
        assert np.all(np.diag(inst.cost.entries) == 0)


class TestStorage:
    def test_instance_round_trip(self, tmp_path, er_instance):
        path = tmp_path / "inst.json"
        save_instance(er_instance, path)
        loaded = load_instance(path)
        assert loaded == er_instance
        assert loaded.graph == er_instance.graph

    def test_sbm_round_trip_keeps_balance(self, tmp_path, sbm_instance):
        path = tmp_path / "sbm.json"
        save_instance(sbm_instance, path)
        assert load_instance(path).truth.balanced

    def test_tampered_payload_detected(self, tmp_path, gaussian_instance):
        path = tmp_path / "inst.json"
        save_instance(gaussian_instance, path)
        doc = json.loads(path.read_text(encoding="utf-8"))
        doc["header"]["seed"] = doc["header"]["seed"] + 1
        path.write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(MalformedFileError) as exc:
            load_instance(path)
        assert exc.value.field == "checksum"

    def test_wrong_kind(self, tmp_path):
        path = tmp_path / "y.json"
        save_factor(random_point(5, 3, seed=0), path)
        with pytest.raises(MalformedFileError) as exc:
            load_instance(path)
        assert exc.value.field == "kind"

    def test_not_json(self, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("not a container", encoding="utf-8")
        with pytest.raises(MalformedFileError):
            load_instance(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(StorageError):
            load_instance(tmp_path / "absent.json")

    def test_factor_round_trip(self, tmp_path):
        Y = random_point(9, 4, seed=2)
        path = tmp_path / "factor.json"
        save_factor(Y, path, metadata={"r": 4})
        assert load_factor(path) == Y
