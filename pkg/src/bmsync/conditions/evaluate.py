"""
按实例模型选择对应的确定性条件
"""
import math
from typing import Any, Dict

from ..config.schema import ErBernoulliParams, GaussianParams, RawParams, SbmParams
from ..core.models import ProblemInstance
from ..core.reports import ConditionReport, Z2DetermReport
from ..errors import InvalidParameterError
from ..instances.costs import COMPLETE, MEASURED, measurement_decomposition
from ..utils.logger import get_logger
from .deterministic import check_sbm_determ, check_z2_determ

logger = get_logger(__name__)


def _not_applicable(name: str, reason: str, **details: Any) -> ConditionReport:
    return ConditionReport(name=name, lhs=math.nan, rhs=math.nan, margin=math.nan,
                           satisfied=False, details={"reason": reason, **details})


def _z2_for(inst: ProblemInstance, r: int, kind: str) -> Z2DetermReport:
    graph, noise = measurement_decomposition(inst, kind)
    return check_z2_determ(graph, noise, inst.truth, r)


def _from_z2(name: str, report: Z2DetermReport, details: Dict[str, Any]) -> ConditionReport:
    return ConditionReport(name=name, lhs=report.lhs, rhs=report.rhs, margin=report.margin,
                           satisfied=report.satisfied, details={**report.to_dict(), **details})


def evaluate_instance(inst: ProblemInstance, r: int) -> ConditionReport:
    """
    高斯：完全图分解上的 Z2 条件
    ER-Bernoulli：实测图与缩放完全图两种分解，取 margin 较大者
    SBM：与中心化方式匹配的 SBM 条件
    Raw：有真值和测量图时按实测图评估，否则不适用（margin 为 NaN）
    """
    params = inst.params
    if inst.truth is None:
        return _not_applicable("none", "instance has no ground truth")

    if isinstance(params, SbmParams):
        if r < 4:
            return _not_applicable("sbm_determ", f"r = {r} is below 4")
        rep = check_sbm_determ(inst.graph, inst.truth, params.p, params.q, r, params.centering)
        return ConditionReport(name="sbm_determ", lhs=rep.lhs, rhs=rep.rhs, margin=rep.margin,
                               satisfied=rep.satisfied, estimated=rep.estimated,
                               details=rep.to_dict())

    if isinstance(params, GaussianParams):
        kinds = [COMPLETE]
    elif isinstance(params, ErBernoulliParams):
        kinds = [MEASURED, COMPLETE]
    elif isinstance(params, RawParams) and inst.graph is not None:
        kinds = [MEASURED]
    else:
        return _not_applicable("none", "raw instance without a measurement graph")

    reports: Dict[str, Z2DetermReport] = {}
    skipped: Dict[str, str] = {}
    for kind in kinds:
        try:
            reports[kind] = _z2_for(inst, r, kind)
        except InvalidParameterError as e:
            skipped[kind] = str(e)
            logger.debug(f"z2 condition skipped for {kind} decomposition: {e}")

    if not reports:
        return _not_applicable("z2_determ", "; ".join(skipped.values()), skipped=skipped)

    best_kind = max(reports, key=lambda k: reports[k].margin)
    details: Dict[str, Any] = {"decomposition": best_kind, "skipped": skipped}
    if len(reports) > 1:
        details["margins"] = {k: rep.margin for k, rep in reports.items()}
    return _from_z2("z2_determ", reports[best_kind], details)
