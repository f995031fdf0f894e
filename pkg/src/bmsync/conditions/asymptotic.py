"""
渐近阈值公式

这些公式描述 n → ∞ 时以概率趋于 1 成立的精确恢复区域；有限 n 下只作参考。
"""
import math
from typing import Tuple

from ..core.reports import ConditionReport
from ..errors import InvalidParameterError
from ..utils.validator import ensure_probability


def _require(ok: bool, message: str, field: str) -> None:
    if not ok:
        raise InvalidParameterError(message, field=field)


def gaussian_sigma_threshold(n: int, r0: int, eps: float) -> float:
    """σ* = (r₀-3)/(r₀-1) · √(n / ((2+ε) log n))"""
    _require(n >= 2, f"n must be at least 2, got {n}", "n")
    _require(r0 >= 3, f"r0 must be at least 3, got {r0}", "r0")
    _require(eps > 0, f"eps must be positive, got {eps}", "eps")
    return (r0 - 3.0) / (r0 - 1.0) * math.sqrt(n / ((2.0 + eps) * math.log(n)))


def gaussian_proof_condition(n: int, sigma: float, r: int, eps: float) -> ConditionReport:
    """有限 n 的充分不等式 σ√((2+ε) n log n) + 45σ√n ≤ (r-3)/(r-1)·n"""
    _require(n >= 2, f"n must be at least 2, got {n}", "n")
    _require(sigma >= 0, f"sigma must be nonnegative, got {sigma}", "sigma")
    _require(r >= 3, f"r must be at least 3, got {r}", "r")
    _require(eps > 0, f"eps must be positive, got {eps}", "eps")
    lhs = sigma * math.sqrt((2.0 + eps) * n * math.log(n)) + 45.0 * sigma * math.sqrt(n)
    rhs = (r - 3.0) / (r - 1.0) * n
    margin = rhs - lhs
    return ConditionReport(name="gaussian_finite_n", lhs=lhs, rhs=rhs, margin=margin,
                           satisfied=margin >= 0, details={"n": n, "sigma": sigma, "r": r, "eps": eps})


def bern_condition(np_over_logn: float, delta: float, r: int, eps: float) -> Tuple[float, bool, bool]:
    """
    ER 图 + Bernoulli 噪声

    value = a(1 - √(1 - c²δ²))，c = (r-3)/(r-1) - ε，满足 value ≥ 1；
    简化条件 1/δ ≤ (r-3)/(r-1)·√(a/(2+ε)) 更严格：它蕴含的是取较小 ε′ 的完整条件，
    ε′ = (r-3)/(r-1)·(1 - (1+ε/2)^(-1/2))（由 1 - √(1-x) ≥ x/2 推出），不一定是同一个 ε。
    """
    _require(np_over_logn >= 0, f"np/log n must be nonnegative, got {np_over_logn}", "np_over_logn")
    _require(0.0 < delta <= 1.0, f"delta must be in (0, 1], got {delta}", "delta")
    _require(r >= 4, f"r must be at least 4, got {r}", "r")
    _require(0.0 < eps <= 1.0 / 3.0, f"eps must be in (0, 1/3], got {eps}", "eps")
    c = (r - 3.0) / (r - 1.0) - eps
    _require(0.0 <= c <= 1.0, f"(r-3)/(r-1) - eps = {c} is outside [0, 1]", "eps")

    value = np_over_logn * (1.0 - math.sqrt(1.0 - (c * delta) ** 2))
    ratio = (r - 3.0) / (r - 1.0)
    simple = 1.0 / delta <= ratio * math.sqrt(np_over_logn / (2.0 + eps))
    return value, value >= 1.0, simple


def bern_corollary_condition(a: float, delta: float, eps: float) -> Tuple[float, bool]:
    """a(1 - √(1 - δ²)) ≥ 1 + ε"""
    _require(a >= 0, f"a must be nonnegative, got {a}", "a")
    _require(0.0 <= delta <= 1.0, f"delta must be in [0, 1], got {delta}", "delta")
    _require(eps > 0, f"eps must be positive, got {eps}", "eps")
    value = a * (1.0 - math.sqrt(1.0 - delta ** 2))
    return value, value >= 1.0 + eps


def sbm_condition(n: int, p: float, q: float, r: int, eps: float) -> Tuple[float, bool]:
    """
    (n / log n)(√(p - γ) - √(q + γ))² ≥ 2，γ = (1/(r-1) + ε)(p - q)
    """
    _require(n >= 2, f"n must be at least 2, got {n}", "n")
    ensure_probability(p, "p")
    ensure_probability(q, "q")
    _require(q < p, f"requires q < p, got p={p}, q={q}", "q")
    _require(r >= 4, f"r must be at least 4, got {r}", "r")
    _require(0.0 < eps <= 1.0 / 12.0, f"eps must be in (0, 1/12], got {eps}", "eps")

    gamma = (1.0 / (r - 1.0) + eps) * (p - q)
    inner, outer = p - gamma, q + gamma
    if inner < 0 or outer < 0 or inner < outer:
        raise InvalidParameterError("gamma exceeds the (p-q)/2 regime assumed by the threshold",
                                    field="eps")
    value = n / math.log(n) * (math.sqrt(inner) - math.sqrt(outer)) ** 2
    return value, value >= 2.0


def sbm_optimal_threshold(n: int, p: float, q: float) -> float:
    """(n / log n)(√p - √q)²；精确恢复的信息论阈值为 2"""
    _require(n >= 2, f"n must be at least 2, got {n}", "n")
    ensure_probability(p, "p")
    ensure_probability(q, "q")
    return n / math.log(n) * (math.sqrt(p) - math.sqrt(q)) ** 2


def sbm_corollary_condition(a: float, b: float) -> Tuple[float, bool]:
    """√a - √b > √2"""
    _require(a >= 0 and b >= 0, f"a and b must be nonnegative, got a={a}, b={b}", "a")
    value = math.sqrt(a) - math.sqrt(b)
    return value, value > math.sqrt(2.0)
