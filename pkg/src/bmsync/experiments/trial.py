"""
单次蒙特卡洛试验
"""
import math
import time
from pathlib import Path
from typing import List, Optional, Tuple

from ..config.schema import SweepSpec
from ..core.reports import TrialRecord
from ..instances.storage import save_factor, save_instance
from ..utils.logger import get_logger
from .grid import Cell, cell_key, cell_params, trial_seed
from .stages import StageMetrics, TrialContext, build_pipeline

logger = get_logger(__name__)

ARTIFACTS_DIR = "artifacts"


def artifact_paths(out_dir: Path, cell: Cell, trial: int) -> Tuple[Path, Path]:
    """(实例文件, 因子文件)"""
    base = Path(out_dir) / ARTIFACTS_DIR / cell_key(cell)
    return base / f"trial_{trial:04d}.instance.json", base / f"trial_{trial:04d}.factor.json"


def _to_record(ctx: TrialContext, metrics: List[StageMetrics], wall_ms: float) -> TrialRecord:
    failed = next((m for m in metrics if not m.success), None)
    best = ctx.solve.best if ctx.solve is not None else None
    cert = ctx.certificate
    rec = ctx.recovery

    if failed is not None:
        status = f"error:{failed.stage_name}"
    elif best is not None:
        status = best.status.value
    else:
        status = "error"

    return TrialRecord(
        cell=dict(ctx.cell),
        trial=ctx.trial,
        recovered=bool(rec.is_exact) if rec is not None and failed is None else False,
        certified_global=bool(cert.is_global) if cert is not None and failed is None else False,
        objective=best.objective_value if best is not None else math.nan,
        grad_residual=cert.grad_residual if cert is not None else math.nan,
        s_min_eig=cert.s_min_eig if cert is not None else math.nan,
        condition_margin=ctx.condition.margin if ctx.condition is not None else math.nan,
        rank1_gap=rec.relative_gap if rec is not None else math.nan,
        correlation=rec.correlation if rec is not None and rec.correlation is not None else math.nan,
        status=status,
        wall_ms=wall_ms,
    )


def execute_trial(spec: SweepSpec, cell: Cell, trial_idx: int,
                  out_dir: Optional[Path] = None) -> Tuple[TrialRecord, List[StageMetrics]]:
    """运行一次试验并返回 (记录, 各阶段指标)；out_dir 给定且开启 save_artifacts 时保存实例与因子"""
    start_time = time.time()
    params, r = cell_params(spec, cell)
    ctx = TrialContext(spec=spec, cell=cell, trial=trial_idx, params=params, r=r,
                       seed=trial_seed(spec.master_seed, cell, trial_idx))
    metrics = build_pipeline(spec).run(ctx)

    if out_dir is not None and spec.save_artifacts and ctx.instance is not None and ctx.solve is not None:
        inst_path, factor_path = artifact_paths(out_dir, cell, trial_idx)
        save_instance(ctx.instance, inst_path)
        save_factor(ctx.solve.best.point, factor_path,
                    metadata={"cell": cell_key(cell), "trial": trial_idx, "r": r})

    wall_ms = (time.time() - start_time) * 1000
    record = _to_record(ctx, metrics, wall_ms)
    logger.debug(f"Trial {cell_key(cell)}#{trial_idx}: recovered={record.recovered}, "
                 f"certified={record.certified_global}, status={record.status}")
    return record, metrics


def run_trial(spec: SweepSpec, cell: Cell, trial_idx: int) -> TrialRecord:
    """给定 (spec, cell, trial_idx) 的结果是确定的（wall_ms 除外）"""
    record, _ = execute_trial(spec, cell, trial_idx)
    return record
