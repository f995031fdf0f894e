"""
命令行端到端流程与退出码
"""
import json
from pathlib import Path

import pytest
import yaml

from bmsync.cli import main
from bmsync.errors import ExitCode
from bmsync.experiments.sweep import RESULTS_FILE
from bmsync.instances import load_instance


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    """不读取仓库里的配置文件和 .env"""
    for name in ("BMSYNC_LOG_LEVEL", "BMSYNC_JOBS", "BMSYNC_CONFIG_PATH"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


def _report(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture
def instance_file(tmp_path) -> Path:
    path = tmp_path / "inst.json"
    code = main(["gen", "--model", "gaussian", "--n", "12", "--sigma", "0.1", "--seed", "3",
                 "--out", str(path), "--report", str(tmp_path / "gen.json")])
    assert code == ExitCode.SUCCESS
    return path


class TestWorkflow:
    def test_gen(self, instance_file, tmp_path):
        report = _report(tmp_path / "gen.json")
        assert report["n"] == 12
        assert report["model"] == "gaussian"
        assert report["out"] == str(instance_file)
        assert load_instance(instance_file).truth is not None

    def test_solve_then_certify(self, instance_file, tmp_path):
        factor = tmp_path / "y.json"
        code = main(["solve", "--in", str(instance_file), "--r", "4", "--seed", "1",
                     "--y-out", str(factor), "--report", str(tmp_path / "solve.json")])
        assert code == ExitCode.SUCCESS
        solved = _report(tmp_path / "solve.json")
        assert solved["best"]["status"] == "converged"
        assert solved["recovery"]["is_exact"]
        assert len(solved["start_objectives"]) == 1

        code = main(["certify", "--in", str(instance_file), "--y", str(factor),
                     "--report", str(tmp_path / "cert.json")])
        assert code == ExitCode.SUCCESS
        cert = _report(tmp_path / "cert.json")
        assert cert["certificate"]["is_global"]
        assert cert["recovery"]["correlation"] == 1.0

    def test_multi_start_report(self, instance_file, tmp_path):
        code = main(["solve", "--in", str(instance_file), "--starts", "3", "--max-iters", "2000",
                     "--report", str(tmp_path / "solve.json")])
        assert code == ExitCode.SUCCESS
        report = _report(tmp_path / "solve.json")
        assert report["starts"] == 3
        assert len(report["start_statuses"]) == 3
        assert report["r"] == 4

    def test_oracle(self, instance_file, tmp_path):
        assert main(["oracle", "--in", str(instance_file),
                     "--report", str(tmp_path / "oracle.json")]) == ExitCode.SUCCESS
        report = _report(tmp_path / "oracle.json")
        assert report["matches_truth"]
        assert report["labels"][0] == 1

    def test_conditions(self, instance_file, tmp_path):
        assert main(["conditions", "--in", str(instance_file), "--r", "5",
                     "--report", str(tmp_path / "cond.json")]) == ExitCode.SUCCESS
        report = _report(tmp_path / "cond.json")
        assert report["r"] == 5
        assert report["name"] == "z2_determ"
        assert report["margin"] == pytest.approx(report["rhs"] - report["lhs"])

    def test_adversary(self, instance_file, tmp_path):
        out = tmp_path / "adv.json"
        assert main(["adversary", "--in", str(instance_file), "--strength", "0.5",
                     "--density", "0.25", "--seed", "2", "--out", str(out),
                     "--report", str(tmp_path / "adv_report.json")]) == ExitCode.SUCCESS
        assert load_instance(out).metadata["adversary"]["strength"] == 0.5

    def test_sweep_and_verify(self, tmp_path):
        spec = tmp_path / "sweep.yaml"
        spec.write_text(yaml.safe_dump({
            "name": "cli",
            "model": {"model": "gaussian", "n": 12},
            "grid": {"sigma": [0.0, 0.1]},
            "trials_per_cell": 2,
            "r": 4,
            "master_seed": 9,
        }), encoding="utf-8")
        out = tmp_path / "run"
        assert main(["sweep", "--spec", str(spec), "--out", str(out)]) == ExitCode.SUCCESS
        assert (out / RESULTS_FILE).exists()
        assert main(["sweep", "--spec", str(spec), "--out", str(out), "--resume"]) == ExitCode.SUCCESS

        assert main(["verify", "--dir", str(out), "--report", str(tmp_path / "v.json")]) == ExitCode.SUCCESS
        assert _report(tmp_path / "v.json")["ok"]

    def test_stdout_report(self, instance_file, capsys):
        assert main(["--log-level", "ERROR", "oracle", "--in", str(instance_file)]) == ExitCode.SUCCESS
        report = json.loads(capsys.readouterr().out)
        assert report["n"] == 12


class TestExitCodes:
    def test_no_command(self):
        assert main([]) == ExitCode.USAGE

    def test_missing_required_argument(self):
        assert main(["gen", "--model", "gaussian"]) == ExitCode.USAGE

    def test_invalid_parameter(self, tmp_path):
        assert main(["gen", "--model", "gaussian", "--n", "10", "--sigma", "-1",
                     "--out", str(tmp_path / "x.json")]) == ExitCode.USAGE

    def test_missing_input(self, tmp_path):
        assert main(["oracle", "--in", str(tmp_path / "absent.json")]) == ExitCode.IO

    def test_malformed_input(self, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("{}", encoding="utf-8")
        assert main(["oracle", "--in", str(path)]) == ExitCode.VERIFICATION

    def test_factor_size_mismatch(self, instance_file, tmp_path):
        other = tmp_path / "small.json"
        factor = tmp_path / "y.json"
        main(["gen", "--model", "gaussian", "--n", "6", "--sigma", "0.1", "--out", str(other),
              "--report", str(tmp_path / "r.json")])
        main(["solve", "--in", str(other), "--y-out", str(factor), "--report", str(tmp_path / "s.json")])
        assert main(["certify", "--in", str(instance_file), "--y", str(factor)]) == ExitCode.USAGE

    def test_explicit_config_missing(self, instance_file, tmp_path):
        assert main(["--config", str(tmp_path / "absent.yaml"),
                     "oracle", "--in", str(instance_file)]) == ExitCode.IO

    def test_verify_mismatch(self, tmp_path):
        spec = tmp_path / "sweep.yaml"
        spec.write_text(yaml.safe_dump({
            "model": {"model": "gaussian", "n": 10},
            "grid": {"sigma": [0.0]},
            "trials_per_cell": 1,
            "r": 4,
        }), encoding="utf-8")
        out = tmp_path / "run"
        assert main(["sweep", "--spec", str(spec), "--out", str(out)]) == ExitCode.SUCCESS
        results = out / RESULTS_FILE
        lines = results.read_text(encoding="utf-8").splitlines()
        header = lines[0].split(",")
        row = lines[1].split(",")
        row[header.index("recovered")] = "False"
        results.write_text("\n".join([lines[0], ",".join(row)]) + "\n", encoding="utf-8")
        assert main(["verify", "--dir", str(out), "--report", str(tmp_path / "v.json")]) == ExitCode.VERIFICATION
        assert _report(tmp_path / "v.json")["mismatches"] == ["sigma=0.0#0"]
