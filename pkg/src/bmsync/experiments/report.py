"""
结果输出：试验 CSV、单元汇总（Wilson 区间）与离线复核
"""
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
from scipy.stats import norm

from ..certificates import check_exact_recovery
from ..core.reports import TrialRecord
from ..errors import MalformedFileError, StorageError
from ..instances.storage import load_factor, load_instance
from ..utils.logger import get_logger
from .grid import Cell, cell_key, format_value
from .trial import artifact_paths

logger = get_logger(__name__)

AXIS_PREFIX = "axis_"
RECORD_COLUMNS = [
    "trial", "recovered", "certified_global", "objective", "grad_residual", "s_min_eig",
    "condition_margin", "rank1_gap", "correlation", "status", "wall_ms",
]
SUMMARY_COLUMNS = [
    "cell", "trials", "recovered", "frequency", "wilson_low", "wilson_high",
    "certified_rate", "mean_condition_margin",
]

PathLike = Union[str, Path]


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """二项比例的 Wilson 得分区间"""
    if trials <= 0:
        return 0.0, 1.0
    z = float(norm.ppf(0.5 + confidence / 2.0))
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class SweepResult:
    """全部试验记录；按单元顺序、试验编号排列"""
    records: List[TrialRecord] = field(default_factory=list)
    cells: List[Cell] = field(default_factory=list)

    def by_cell(self) -> Dict[str, List[TrialRecord]]:
        grouped: Dict[str, List[TrialRecord]] = {}
        for rec in self.records:
            grouped.setdefault(cell_key(rec.cell), []).append(rec)
        return grouped

    def frequencies(self) -> Dict[str, float]:
        """单元键 → 恢复频率"""
        return {key: sum(r.recovered for r in recs) / len(recs)
                for key, recs in self.by_cell().items()}

    def intervals(self) -> Dict[str, Tuple[float, float]]:
        return {key: wilson_interval(sum(r.recovered for r in recs), len(recs))
                for key, recs in self.by_cell().items()}


def _axes(records: Sequence[TrialRecord]) -> List[str]:
    axes = set()
    for rec in records:
        axes.update(rec.cell)
    return sorted(axes)


def records_frame(records: Sequence[TrialRecord], axes: Sequence[str] = ()) -> pd.DataFrame:
    """记录 → DataFrame；坐标列按轴名字典序，写成规范文本"""
    axes = sorted(set(axes) | set(_axes(records)))
    columns = [AXIS_PREFIX + a for a in axes] + RECORD_COLUMNS
    rows = []
    for rec in records:
        row: Dict[str, Any] = {AXIS_PREFIX + a: format_value(rec.cell[a]) if a in rec.cell else ""
                               for a in axes}
        data = rec.to_dict()
        row.update({c: data[c] for c in RECORD_COLUMNS})
        rows.append(row)
    return pd.DataFrame(rows, columns=columns)


def emit_csv(result: SweepResult, path: PathLike) -> Path:
    """每条试验记录一行；空结果只写表头"""
    path = Path(path)
    axes = _axes(result.records) or sorted({a for cell in result.cells for a in cell})
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        records_frame(result.records, axes).to_csv(path, index=False, lineterminator="\n")
    except OSError as e:
        raise StorageError(f"Failed to write {path}: {e}") from e
    logger.debug(f"{len(result.records)} records written to {path}")
    return path


def read_csv(path: PathLike) -> List[TrialRecord]:
    """解析 emit_csv 的输出；坐标值保持为文本"""
    try:
        header = pd.read_csv(path, nrows=0).columns
        axis_cols = [c for c in header if c.startswith(AXIS_PREFIX)]
        frame = pd.read_csv(path, dtype={c: str for c in axis_cols + ["status"]},
                            keep_default_na=False, na_values={c: [""] for c in RECORD_COLUMNS})
    except FileNotFoundError as e:
        raise StorageError(f"Results file not found: {path}") from e
    except OSError as e:
        raise StorageError(f"Failed to read {path}: {e}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise MalformedFileError(f"{path} is not a results CSV: {e}", field="document") from e

    missing = [c for c in RECORD_COLUMNS if c not in frame.columns]
    if missing:
        raise MalformedFileError(f"{path} is missing columns {missing}", field=missing[0])

    records = []
    for row in frame.to_dict(orient="records"):
        cell = {c[len(AXIS_PREFIX):]: row[c] for c in axis_cols if row[c] != ""}
        records.append(TrialRecord(
            cell=cell,
            trial=int(row["trial"]),
            recovered=_as_bool(row["recovered"]),
            certified_global=_as_bool(row["certified_global"]),
            objective=float(row["objective"]),
            grad_residual=float(row["grad_residual"]),
            s_min_eig=float(row["s_min_eig"]),
            condition_margin=float(row["condition_margin"]),
            rank1_gap=float(row["rank1_gap"]),
            correlation=float(row["correlation"]),
            status=str(row["status"]),
            wall_ms=float(row["wall_ms"]),
        ))
    return records


def _as_bool(value: Any) -> bool:
    if isinstance(value, str):
        return value.strip().lower() == "true"
    return bool(value)


def summary_frame(result: SweepResult) -> pd.DataFrame:
    rows = []
    for key, recs in result.by_cell().items():
        hits = sum(r.recovered for r in recs)
        low, high = wilson_interval(hits, len(recs))
        margins = [r.condition_margin for r in recs if not math.isnan(r.condition_margin)]
        rows.append({
            "cell": key,
            "trials": len(recs),
            "recovered": hits,
            "frequency": hits / len(recs),
            "wilson_low": low,
            "wilson_high": high,
            "certified_rate": sum(r.certified_global for r in recs) / len(recs),
            "mean_condition_margin": sum(margins) / len(margins) if margins else math.nan,
        })
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def emit_summary(result: SweepResult, path: Optional[PathLike] = None) -> pd.DataFrame:
    """单元恢复频率与 95% Wilson 区间；给定 path 时同时写出 CSV"""
    frame = summary_frame(result)
    if path is not None:
        try:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(path, index=False, lineterminator="\n")
        except OSError as e:
            raise StorageError(f"Failed to write {path}: {e}") from e
    return frame


@dataclass
class VerifyReport:
    """离线复核结果"""
    checked: int = 0
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify(out_dir: PathLike, results_name: str = "results.csv") -> VerifyReport:
    """
    对每条 certified_global 记录，从保存的实例与因子重新判定精确恢复并与 recovered 比较

    缺少产物文件时抛 StorageError。
    """
    out_dir = Path(out_dir)
    report = VerifyReport()
    for rec in read_csv(out_dir / results_name):
        if not rec.certified_global:
            continue
        inst_path, factor_path = artifact_paths(out_dir, rec.cell, rec.trial)
        if not inst_path.exists() or not factor_path.exists():
            raise StorageError(f"Artifacts for {cell_key(rec.cell)} trial {rec.trial} are missing "
                               f"(was the sweep run with save_artifacts disabled?)")
        inst = load_instance(inst_path)
        if inst.truth is None:
            continue
        exact = check_exact_recovery(load_factor(factor_path), inst.truth).is_exact
        report.checked += 1
        if exact != rec.recovered:
            label = f"{cell_key(rec.cell)}#{rec.trial}"
            report.mismatches.append(label)
            logger.error(f"Verification mismatch for {label}: recorded {rec.recovered}, "
                         f"recomputed {exact}")
    logger.info(f"Verified {report.checked} certified records, {len(report.mismatches)} mismatches")
    return report
