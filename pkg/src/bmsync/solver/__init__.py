"""
二阶临界点求解器
"""
from .ascent import RiemannianAscent, default_rank, solve
from .multistart import MultiStartResult, multi_start, select_best, start_seed

__all__ = [
    "RiemannianAscent",
    "default_rank",
    "solve",
    "MultiStartResult",
    "multi_start",
    "select_best",
    "start_seed",
]
