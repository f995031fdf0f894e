"""
配置管理包
"""
from .config_manager import ConfigManager, load_sweep_spec
from .schema import (
    AdversaryConfig,
    AppConfig,
    Centering,
    ErBernoulliParams,
    GaussianParams,
    ModelKind,
    ModelParams,
    RawParams,
    SbmParams,
    SolverConfig,
    SweepSpec,
    model_params_from_dict,
)
from .settings import Settings

__all__ = [
    "ConfigManager",
    "load_sweep_spec",
    "AdversaryConfig",
    "AppConfig",
    "Centering",
    "ErBernoulliParams",
    "GaussianParams",
    "ModelKind",
    "ModelParams",
    "RawParams",
    "SbmParams",
    "SolverConfig",
    "SweepSpec",
    "model_params_from_dict",
    "Settings",
]
