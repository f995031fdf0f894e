"""
扫描调度：按单元检查点、可续跑、可并行

输出目录结构：
    checkpoint.json          已完成的单元键与配置指纹
    cells/<cell_key>.csv     每个完成单元的试验记录
    artifacts/<cell_key>/    每次试验的实例与最优因子（save_artifacts 时）
    results.csv, summary.csv 全部完成后写出
"""
import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

from ..config.schema import SweepSpec
from ..core.reports import TrialRecord
from ..errors import InvalidParameterError, MalformedFileError, StorageError
from ..utils.logger import get_logger
from ..utils.metrics import MetricsCollector
from .grid import Cell, cell_key, expand_grid
from .report import SweepResult, emit_csv, emit_summary, read_csv
from .stages import StageMetrics
from .trial import execute_trial

logger = get_logger(__name__)

CHECKPOINT_FILE = "checkpoint.json"
CELLS_DIR = "cells"
RESULTS_FILE = "results.csv"
SUMMARY_FILE = "summary.csv"

PathLike = Union[str, Path]


def spec_fingerprint(spec: SweepSpec) -> str:
    """配置指纹：续跑时必须与检查点一致"""
    canonical = json.dumps(spec.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class Checkpoint:
    """按单元粒度记录已完成的工作"""

    def __init__(self, out_dir: Path, fingerprint: str):
        self.out_dir = out_dir
        self.path = out_dir / CHECKPOINT_FILE
        self.fingerprint = fingerprint
        self.completed: Set[str] = set()
        self.logger = get_logger(__name__)

    def load(self) -> "Checkpoint":
        if not self.path.exists():
            return self
        try:
            data = json.loads(self.path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise MalformedFileError(f"{self.path} is not valid JSON", field="checkpoint") from e
        except OSError as e:
            raise StorageError(f"Failed to read {self.path}: {e}") from e
        if data.get("spec") != self.fingerprint:
            raise InvalidParameterError(
                f"{self.path} was written for a different sweep spec; use a fresh output directory",
                field="resume")
        self.completed = set(data.get("completed", []))
        self.logger.info(f"Resuming: {len(self.completed)} cells already complete")
        return self

    def cell_path(self, key: str) -> Path:
        return self.out_dir / CELLS_DIR / f"{key}.csv"

    def mark(self, key: str, records: List[TrialRecord]) -> None:
        """写出单元记录后再更新检查点（先写临时文件再替换）"""
        emit_csv(SweepResult(records=records), self.cell_path(key))
        self.completed.add(key)
        payload = {"spec": self.fingerprint, "completed": sorted(self.completed)}
        tmp = self.path.with_suffix(".json.tmp")
        try:
            tmp.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
            os.replace(tmp, self.path)
        except OSError as e:
            raise StorageError(f"Failed to write {self.path}: {e}") from e


def _run_serial(spec: SweepSpec, tasks: List[Tuple[Cell, int]], out_dir: Optional[Path]):
    for cell, trial in tasks:
        yield execute_trial(spec, cell, trial, out_dir)


def _run_parallel(spec: SweepSpec, tasks: List[Tuple[Cell, int]], out_dir: Optional[Path], jobs: int):
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(execute_trial, spec, cell, trial, out_dir) for cell, trial in tasks]
        try:
            for future in as_completed(futures):
                yield future.result()
        except BaseException:
            for future in futures:
                future.cancel()
            raise


def run_sweep(spec: SweepSpec, out_dir: Optional[PathLike] = None, jobs: int = 1,
              resume: bool = False) -> SweepResult:
    """
    执行全部 单元 × 试验

    结果按单元展开顺序和试验编号排列，与执行顺序无关。out_dir 给定时每完成一个单元
    即写出检查点；中断后已完成单元保留，resume=True 时跳过它们。
    """
    if jobs < 1:
        raise InvalidParameterError(f"jobs must be at least 1, got {jobs}", field="jobs")
    start_time = time.time()
    cells = expand_grid(spec)
    keys = [cell_key(c) for c in cells]
    trials = spec.trials_per_cell

    out = Path(out_dir) if out_dir is not None else None
    checkpoint: Optional[Checkpoint] = None
    done: Dict[str, List[TrialRecord]] = {}
    if out is not None:
        checkpoint = Checkpoint(out, spec_fingerprint(spec))
        if resume:
            checkpoint.load()
            for key in keys:
                if key in checkpoint.completed:
                    done[key] = read_csv(checkpoint.cell_path(key))

    pending: Dict[str, Dict[int, TrialRecord]] = {k: {} for k in keys if k not in done}
    tasks = [(cell, t) for cell, key in zip(cells, keys) if key in pending for t in range(trials)]
    logger.info(f"Sweep '{spec.name}': {len(cells)} cells × {trials} trials "
                f"({len(tasks)} to run, {len(done)} cells resumed, jobs={jobs})")

    collector = MetricsCollector()
    runner = _run_parallel(spec, tasks, out, jobs) if jobs > 1 else _run_serial(spec, tasks, out)
    try:
        for record, metrics in runner:
            key = cell_key(record.cell)
            pending[key][record.trial] = record
            _collect(collector, record, metrics)
            if len(pending[key]) == trials:
                done[key] = [pending[key][t] for t in range(trials)]
                freq = sum(r.recovered for r in done[key]) / trials
                logger.info(f"Cell {key} completed: recovery frequency {freq:.3f}")
                if checkpoint is not None:
                    checkpoint.mark(key, done[key])
    except KeyboardInterrupt:
        logger.warning(f"Sweep interrupted with {len(done)}/{len(cells)} cells complete; "
                       f"rerun with resume to continue")
        raise

    records = [rec for key in keys for rec in done[key]]
    result = SweepResult(records=records, cells=cells)
    if out is not None:
        emit_csv(result, out / RESULTS_FILE)
        emit_summary(result, out / SUMMARY_FILE)

    stats = collector.get_stats()
    latency_ms = (time.time() - start_time) * 1000
    logger.info(f"sweep completed in {latency_ms:.2f}ms: {len(records)} records, "
                f"solve p95 {stats.get('solve_latency_p95', 0.0):.2f}ms, "
                f"errors {stats.get('error_count', 0)}")
    return result


def _collect(collector: MetricsCollector, record: TrialRecord, metrics: List[StageMetrics]) -> None:
    for m in metrics:
        collector.record_stage(m.stage_name, m.latency_ms, m.success)
    collector.record_trial(record.recovered, record.certified_global)
