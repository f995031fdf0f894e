"""
试验阶段与管道

一次试验依次经过：生成实例 → 单调对手（可选）→ 多起点求解 → 证书 → 恢复判定 → 条件评估。
阶段失败时记录指标并终止后续阶段，不向外抛出。
"""
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional

from ..certificates import certify, check_exact_recovery
from ..conditions import evaluate_instance
from ..config.schema import ModelParams, SweepSpec
from ..core.models import ProblemInstance
from ..core.reports import ConditionReport, CriticalityReport, RecoveryReport
from ..instances import apply_monotone_adversary, generate
from ..solver import MultiStartResult, multi_start
from ..utils.logger import get_logger
from ..utils.rng import derive_seed


class StageType(str, Enum):
    """阶段类型"""
    GENERATE = "generate"
    ADVERSARY = "adversary"
    SOLVE = "solve"
    CERTIFY = "certify"
    RECOVERY = "recovery"
    CONDITION = "condition"


@dataclass(frozen=True)
class StageMetrics:
    """阶段执行指标"""
    stage_name: str
    latency_ms: float
    success: bool
    error_message: Optional[str] = None


@dataclass
class TrialContext:
    """单次试验在各阶段间传递的状态"""
    spec: SweepSpec
    cell: Dict[str, Any]
    trial: int
    params: ModelParams
    r: int
    seed: int
    base_instance: Optional[ProblemInstance] = None
    instance: Optional[ProblemInstance] = None
    solve: Optional[MultiStartResult] = None
    certificate: Optional[CriticalityReport] = None
    recovery: Optional[RecoveryReport] = None
    condition: Optional[ConditionReport] = None


class BaseStage(ABC):
    """阶段基类"""

    def __init__(self, stage_type: StageType, enabled: bool = True):
        self.stage_type = stage_type
        self.name = stage_type.value
        self.enabled = enabled
        self.logger = get_logger(f"{__name__}.{self.name}")

    @abstractmethod
    def execute(self, ctx: TrialContext) -> None:
        pass

    def run(self, ctx: TrialContext) -> StageMetrics:
        start_time = time.time()

        if not self.enabled:
            self.logger.debug(f"Stage {self.name} disabled")
            return StageMetrics(stage_name=self.name, latency_ms=0.0, success=True)

        try:
            self.execute(ctx)
            latency_ms = (time.time() - start_time) * 1000
            self.logger.debug(f"{self.name} completed in {latency_ms:.2f}ms")
            return StageMetrics(stage_name=self.name, latency_ms=latency_ms, success=True)

        except Exception as e:
            latency_ms = (time.time() - start_time) * 1000
            self.logger.error(f"{self.name} failed (cell {ctx.cell}, trial {ctx.trial}): {str(e)}")
            return StageMetrics(stage_name=self.name, latency_ms=latency_ms, success=False,
                                error_message=str(e))


class GenerateStage(BaseStage):
    def __init__(self):
        super().__init__(StageType.GENERATE)

    def execute(self, ctx: TrialContext) -> None:
        ctx.base_instance = generate(ctx.params, derive_seed(ctx.seed, "instance"))
        ctx.instance = ctx.base_instance


class AdversaryStage(BaseStage):
    def __init__(self, enabled: bool):
        super().__init__(StageType.ADVERSARY, enabled)

    def execute(self, ctx: TrialContext) -> None:
        adv = ctx.spec.adversary
        assert adv is not None and ctx.base_instance is not None
        ctx.instance = apply_monotone_adversary(ctx.base_instance, adv.strength, adv.density,
                                                derive_seed(ctx.seed, "adversary"))


class SolveStage(BaseStage):
    def __init__(self):
        super().__init__(StageType.SOLVE)

    def execute(self, ctx: TrialContext) -> None:
        assert ctx.instance is not None
        ctx.solve = multi_start(ctx.instance.cost, ctx.r, ctx.spec.solver, ctx.spec.starts,
                                seed=derive_seed(ctx.seed, "solver"))


class CertifyStage(BaseStage):
    def __init__(self):
        super().__init__(StageType.CERTIFY)

    def execute(self, ctx: TrialContext) -> None:
        assert ctx.instance is not None and ctx.solve is not None
        ctx.certificate = certify(ctx.instance.cost, ctx.solve.best.point,
                                  dense_limit=ctx.spec.solver.dense_limit)


class RecoveryStage(BaseStage):
    def __init__(self):
        super().__init__(StageType.RECOVERY)

    def execute(self, ctx: TrialContext) -> None:
        assert ctx.instance is not None and ctx.solve is not None
        if ctx.instance.truth is not None:
            ctx.recovery = check_exact_recovery(ctx.solve.best.point, ctx.instance.truth)


class ConditionStage(BaseStage):
    """条件在对手扰动之前的实例上评估"""

    def __init__(self):
        super().__init__(StageType.CONDITION)

    def execute(self, ctx: TrialContext) -> None:
        assert ctx.base_instance is not None
        ctx.condition = evaluate_instance(ctx.base_instance, ctx.r)


class Pipeline:
    """试验管道"""

    def __init__(self, stages: List[BaseStage]):
        self.stages = stages
        self.logger = get_logger(__name__)

    def run(self, ctx: TrialContext) -> List[StageMetrics]:
        all_metrics = []
        for stage in self.stages:
            if not stage.enabled:
                continue

            metrics = stage.run(ctx)
            all_metrics.append(metrics)

            if not metrics.success:
                self.logger.warning(f"Stage {stage.name} failed, skipping remaining stages")
                break

        return all_metrics


def build_pipeline(spec: SweepSpec) -> Pipeline:
    """按扫描配置组装标准试验管道"""
    return Pipeline([
        GenerateStage(),
        AdversaryStage(enabled=spec.adversary is not None),
        SolveStage(),
        CertifyStage(),
        RecoveryStage(),
        ConditionStage(),
    ])
