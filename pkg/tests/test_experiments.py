"""
网格展开、单次试验、扫描调度、结果输出与离线复核
"""
import dataclasses
import json
import math

import pandas as pd
import pytest

from bmsync.config.schema import AdversaryConfig, SbmParams, SolverConfig, SweepSpec
from bmsync.core.reports import TrialRecord
from bmsync.errors import InvalidParameterError, StorageError
from bmsync.experiments import (
    SweepResult,
    cell_key,
    cell_params,
    emit_csv,
    emit_summary,
    expand_grid,
    read_csv,
    run_sweep,
    run_trial,
    spec_fingerprint,
    trial_seed,
    verify,
    wilson_interval,
)
from bmsync.experiments.sweep import CELLS_DIR, CHECKPOINT_FILE, RESULTS_FILE, SUMMARY_FILE
from bmsync.solver import default_rank


def _same(a: TrialRecord, b: TrialRecord) -> bool:
    return dataclasses.replace(a, wall_ms=0.0) == dataclasses.replace(b, wall_ms=0.0)


def _spec(**overrides) -> SweepSpec:
    data = dict(
        name="unit",
        model={"model": "gaussian", "n": 16, "sigma": 0.0},
        grid={"sigma": [0.0]},
        trials_per_cell=1,
        r=4,
        master_seed=5,
        solver=SolverConfig(max_iters=3000),
    )
    data.update(overrides)
    return SweepSpec(**data)


class TestGrid:
    def test_axes_sorted_values_in_order(self):
        spec = _spec(grid={"sigma": [0.0, 0.2], "n": [10, 20]})
        assert expand_grid(spec) == [
            {"n": 10, "sigma": 0.0},
            {"n": 10, "sigma": 0.2},
            {"n": 20, "sigma": 0.0},
            {"n": 20, "sigma": 0.2},
        ]

    def test_cell_key(self):
        assert cell_key({"b": 4, "a": 16.0}) == "a=16.0__b=4"
        assert cell_key({"centering": "known_pq"}) == "centering=known_pq"

    def test_derived_sbm_axes(self):
        spec = _spec(model={"model": "sbm", "n": 400}, grid={"a": [16.0], "b": [4.0]}, r=None)
        params, r = cell_params(spec, {"a": 16.0, "b": 4.0})
        assert isinstance(params, SbmParams)
        assert params.p == pytest.approx(16.0 * math.log(400) / 400)
        assert params.b == pytest.approx(4.0)
        assert r == default_rank(400)

    def test_sigma_scale_axis(self):
        spec = _spec(model={"model": "gaussian", "n": 100}, grid={"sigma_scale": [0.5]})
        params, _ = cell_params(spec, {"sigma_scale": 0.5})
        assert params.sigma_scale == pytest.approx(0.5)

    def test_rank_axis_overrides(self):
        params, r = cell_params(_spec(grid={"r": [7]}), {"r": 7})
        assert r == 7
        assert params.n == 16

    def test_invalid_cell(self):
        spec = _spec(model={"model": "sbm", "n": 100}, grid={"a": [2.0], "b": [4.0]})
        with pytest.raises(InvalidParameterError):
            cell_params(spec, {"a": 2.0, "b": 4.0})

    def test_trial_seeds(self):
        cell = {"sigma": 0.1}
        assert trial_seed(3, cell, 0) == trial_seed(3, cell, 0)
        assert trial_seed(3, cell, 0) != trial_seed(3, cell, 1)
        assert trial_seed(3, cell, 0) != trial_seed(3, {"sigma": 0.2}, 0)


class TestTrial:
    def test_deterministic(self, small_sweep):
        cell = {"sigma": 0.2}
        assert _same(run_trial(small_sweep, cell, 1), run_trial(small_sweep, cell, 1))

    def test_noiseless_recovered_and_certified(self, small_sweep):
        record = run_trial(small_sweep, {"sigma": 0.0}, 0)
        assert record.recovered
        assert record.certified_global
        assert record.status == "converged"
        assert record.condition_margin > 0
        assert record.correlation == 1.0

    def test_empty_graph_not_recovered(self):
        spec = _spec(model={"model": "erbern", "n": 12, "delta": 0.5}, grid={"p": [0.0]}, r=None)
        record = run_trial(spec, {"p": 0.0}, 0)
        assert not record.recovered
        assert record.objective == 0.0
        assert record.condition_margin < 0

    def test_adversary_keeps_condition_of_base_instance(self):
        spec = _spec(adversary=AdversaryConfig(strength=1.0, density=0.3))
        record = run_trial(spec, {"sigma": 0.0}, 0)
        assert not record.status.startswith("error")
        assert record.recovered
        assert record.condition_margin == pytest.approx(16 / 3)


class TestSweep:
    def test_records_in_cell_order(self, small_sweep):
        result = run_sweep(small_sweep)
        assert [(r.cell["sigma"], r.trial) for r in result.records] == [
            (0.0, 0), (0.0, 1), (0.2, 0), (0.2, 1)]
        assert result.frequencies()[cell_key({"sigma": 0.0})] == 1.0
        assert result.intervals()[cell_key({"sigma": 0.0})] == wilson_interval(2, 2)

    def test_output_directory(self, small_sweep, tmp_path):
        run_sweep(small_sweep, out_dir=tmp_path)
        for name in (RESULTS_FILE, SUMMARY_FILE, CHECKPOINT_FILE):
            assert (tmp_path / name).exists()
        checkpoint = json.loads((tmp_path / CHECKPOINT_FILE).read_text(encoding="utf-8"))
        assert checkpoint["spec"] == spec_fingerprint(small_sweep)
        assert sorted(checkpoint["completed"]) == ["sigma=0.0", "sigma=0.2"]
        assert (tmp_path / CELLS_DIR / "sigma=0.0.csv").exists()
        assert (tmp_path / "artifacts" / "sigma=0.2").is_dir()

    def test_resume_reuses_completed_cells(self, small_sweep, tmp_path):
        first = run_sweep(small_sweep, out_dir=tmp_path)
        second = run_sweep(small_sweep, out_dir=tmp_path, resume=True)
        assert [r.recovered for r in second.records] == [r.recovered for r in first.records]
        assert [r.objective for r in second.records] == pytest.approx(
            [r.objective for r in first.records])

    def test_resume_rejects_different_spec(self, small_sweep, tmp_path):
        run_sweep(small_sweep, out_dir=tmp_path)
        changed = small_sweep.model_copy(update={"trials_per_cell": 3})
        with pytest.raises(InvalidParameterError):
            run_sweep(changed, out_dir=tmp_path, resume=True)

    def test_more_trials_keep_existing_records(self, small_sweep):
        base = run_sweep(small_sweep).records
        extended = run_sweep(small_sweep.model_copy(update={"trials_per_cell": 3})).records
        kept = [r for r in extended if r.trial < 2]
        assert all(_same(a, b) for a, b in zip(base, kept))

    def test_adding_cells_keeps_existing_records(self, small_sweep):
        base = run_sweep(small_sweep).records
        wider = run_sweep(small_sweep.model_copy(update={"grid": {"sigma": [0.0, 0.1, 0.2]}})).records
        kept = [r for r in wider if r.cell["sigma"] != 0.1]
        assert all(_same(a, b) for a, b in zip(base, kept))

    def test_jobs_must_be_positive(self, small_sweep):
        with pytest.raises(InvalidParameterError):
            run_sweep(small_sweep, jobs=0)

    @pytest.mark.slow
    def test_parallel_matches_serial(self, small_sweep):
        serial = run_sweep(small_sweep).records
        parallel = run_sweep(small_sweep, jobs=2).records
        assert all(_same(a, b) for a, b in zip(serial, parallel))


class TestReport:
    def test_wilson(self):
        low, high = wilson_interval(20, 20)
        assert low == pytest.approx(0.8389, abs=1e-4)
        assert high == pytest.approx(1.0)
        assert wilson_interval(0, 0) == (0.0, 1.0)

    def test_empty_result_writes_header(self, tmp_path):
        path = emit_csv(SweepResult(cells=[{"sigma": 0.1}]), tmp_path / "r.csv")
        header = path.read_text(encoding="utf-8").splitlines()
        assert len(header) == 1
        assert header[0].startswith("axis_sigma,trial,recovered")
        assert read_csv(path) == []

    def test_csv_round_trip(self, small_sweep, tmp_path):
        result = run_sweep(small_sweep)
        path = emit_csv(result, tmp_path / "r.csv")
        records = read_csv(path)
        assert SweepResult(records=records).frequencies() == result.frequencies()
        assert records[0].cell == {"sigma": "0.0"}

    def test_rerun_gives_identical_csv(self, small_sweep, tmp_path):
        """除 wall_ms 外两次运行的 CSV 逐字节一致"""
        texts = []
        for name in ("a.csv", "b.csv"):
            path = emit_csv(run_sweep(small_sweep), tmp_path / name)
            frame = pd.read_csv(path, dtype=str, keep_default_na=False).drop(columns=["wall_ms"])
            texts.append(frame.to_csv(index=False, lineterminator="\n"))
        assert texts[0] == texts[1]
        assert len(texts[0].splitlines()) > 1

    def test_summary(self, small_sweep, tmp_path):
        frame = emit_summary(run_sweep(small_sweep), tmp_path / "summary.csv")
        assert list(frame["cell"]) == ["sigma=0.0", "sigma=0.2"]
        assert list(frame["trials"]) == [2, 2]
        written = pd.read_csv(tmp_path / "summary.csv")
        assert list(written.columns) == list(frame.columns)


class TestVerify:
    def test_clean_run_verifies(self, small_sweep, tmp_path):
        run_sweep(small_sweep, out_dir=tmp_path)
        report = verify(tmp_path)
        assert report.ok
        assert report.checked >= 2

    def test_tampered_record_detected(self, small_sweep, tmp_path):
        run_sweep(small_sweep, out_dir=tmp_path)
        records = read_csv(tmp_path / RESULTS_FILE)
        records[0] = dataclasses.replace(records[0], recovered=False)
        emit_csv(SweepResult(records=records), tmp_path / RESULTS_FILE)
        report = verify(tmp_path)
        assert not report.ok
        assert report.mismatches == ["sigma=0.0#0"]

    def test_missing_artifacts(self, small_sweep, tmp_path):
        spec = small_sweep.model_copy(update={"save_artifacts": False})
        run_sweep(spec, out_dir=tmp_path)
        with pytest.raises(StorageError):
            verify(tmp_path)
