from .logger import get_logger, set_log_level
from .metrics import MetricsCollector
from .rng import derive_seed, make_rng

__all__ = ["get_logger", "set_log_level", "MetricsCollector", "derive_seed", "make_rng"]
