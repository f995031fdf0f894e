"""
配置数据模型 - 使用Pydantic进行验证
"""
import math
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator

from ..utils.validator import MAX_DENSE_N


class ModelKind(str, Enum):
    """实例模型类型"""
    GAUSSIAN = "gaussian"
    ER_BERNOULLI = "erbern"
    SBM = "sbm"
    RAW = "raw"


class Centering(str, Enum):
    """SBM 代价矩阵的中心化方式"""
    MEAN_ESTIMATE = "mean_estimate"
    KNOWN_PQ = "known_pq"


class _Params(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", use_enum_values=False)


class GaussianParams(_Params):
    """高斯噪声 Z2 同步：C = zzᵀ + σW"""
    model: Literal["gaussian"] = "gaussian"
    n: int = Field(..., ge=2, le=MAX_DENSE_N, description="变量个数")
    sigma: float = Field(..., ge=0.0, description="噪声水平 σ")

    @property
    def sigma_scale(self) -> float:
        """σ / √(n / (2 log n))"""
        return self.sigma / math.sqrt(self.n / (2.0 * math.log(self.n)))


class ErBernoulliParams(_Params):
    """Erdős–Rényi 测量图 + Bernoulli 符号噪声"""
    model: Literal["erbern"] = "erbern"
    n: int = Field(..., ge=1, le=MAX_DENSE_N, description="变量个数")
    p: float = Field(..., ge=0.0, le=1.0, description="边概率")
    delta: float = Field(..., ge=0.0, le=1.0, description="正确偏置 δ")

    @property
    def a(self) -> float:
        """np / log n"""
        return self.n * self.p / math.log(self.n) if self.n > 1 else math.inf


class SbmParams(_Params):
    """平衡二分随机块模型"""
    model: Literal["sbm"] = "sbm"
    n: int = Field(..., ge=2, le=MAX_DENSE_N, description="顶点个数（偶数）")
    p: float = Field(..., ge=0.0, le=1.0, description="簇内边概率")
    q: float = Field(..., ge=0.0, le=1.0, description="簇间边概率")
    centering: Centering = Field(default=Centering.MEAN_ESTIMATE, description="中心化方式")

    @model_validator(mode="after")
    def _check_sbm(self) -> "SbmParams":
        if self.n % 2:
            raise ValueError(f"SBM requires even n, got {self.n}")
        if not self.q < self.p:
            raise ValueError(f"SBM requires q < p, got p={self.p}, q={self.q}")
        return self

    @property
    def a(self) -> float:
        return self.n * self.p / math.log(self.n)

    @property
    def b(self) -> float:
        return self.n * self.q / math.log(self.n)


class RawParams(_Params):
    """用户提供的代价矩阵"""
    model: Literal["raw"] = "raw"
    n: int = Field(..., ge=1, le=MAX_DENSE_N)


ModelParams = Annotated[
    Union[GaussianParams, ErBernoulliParams, SbmParams, RawParams],
    Field(discriminator="model"),
]

_params_adapter: TypeAdapter = TypeAdapter(ModelParams)


def model_params_from_dict(data: Dict[str, Any]) -> Any:
    """按 model 字段解析参数"""
    return _params_adapter.validate_python(data)


class SolverConfig(BaseModel):
    """黎曼梯度上升求解器配置"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iters: int = Field(default=20000, ge=1, description="最大迭代次数")
    grad_tol: float = Field(default=1e-9, gt=0.0, description="相对一阶容差")
    curvature_tol: float = Field(default=1e-8, gt=0.0, description="相对负曲率容差")
    escape_step: float = Field(default=1e-3, gt=0.0, description="逃逸扰动初始尺度")
    max_escapes: int = Field(default=25, ge=1, description="最多逃逸次数")
    armijo_c: float = Field(default=1e-4, gt=0.0, lt=1.0, description="充分上升常数")
    backtrack: float = Field(default=0.5, gt=0.0, lt=1.0, description="回溯收缩因子")
    max_backtracks: int = Field(default=60, ge=1, description="单步最大回溯次数")
    lanczos_tol: float = Field(default=1e-10, gt=0.0, description="Lanczos 容差")
    dense_limit: int = Field(default=1024, ge=1, description="低于该维度使用稠密特征分解")
    record_trace: bool = Field(default=False, description="是否记录逐次迭代日志")


class AdversaryConfig(BaseModel):
    """单调对手扰动参数"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    strength: float = Field(default=1.0, ge=0.0, description="扰动幅度上界")
    density: float = Field(default=0.2, ge=0.0, le=1.0, description="被扰动的元素对比例")


# 网格轴：模板字段或派生轴
GRID_AXES = {"n", "sigma", "p", "q", "delta", "centering", "a", "b", "sigma_scale", "r"}


class SweepSpec(BaseModel):
    """蒙特卡洛扫描配置"""
    model_config = ConfigDict(extra="forbid")

    name: str = Field(default="sweep", description="扫描名称")
    model: Dict[str, Any] = Field(..., description="ModelParams 模板（可缺省被网格覆盖的字段）")
    grid: Dict[str, List[Any]] = Field(..., description="参数轴 → 取值列表")
    trials_per_cell: int = Field(default=10, ge=1, description="每个网格单元的试验次数")
    r: Optional[int] = Field(default=None, ge=2, description="分解秩；缺省为 max(4, ⌈log₂ n⌉)")
    starts: int = Field(default=1, ge=1, description="多起点次数")
    master_seed: int = Field(default=0, ge=0, lt=2 ** 64, description="主种子")
    solver: SolverConfig = Field(default_factory=SolverConfig, description="求解器配置")
    adversary: Optional[AdversaryConfig] = Field(default=None, description="单调对手（可选）")
    save_artifacts: bool = Field(default=True, description="保存实例与因子以便 verify")

    @field_validator("model")
    def validate_model(cls, v):
        kind = v.get("model")
        valid = {k.value for k in ModelKind} - {ModelKind.RAW.value}
        if kind not in valid:
            raise ValueError(f"Invalid model: {kind}. Valid models: {sorted(valid)}")
        return v

    @field_validator("grid")
    def validate_grid(cls, v):
        if not v:
            raise ValueError("grid must contain at least one axis")
        for axis, values in v.items():
            if axis not in GRID_AXES:
                raise ValueError(f"Invalid grid axis: {axis}. Valid axes: {sorted(GRID_AXES)}")
            if not values:
                raise ValueError(f"grid axis '{axis}' has no values")
        return v


class AppConfig(BaseModel):
    """应用配置总模型"""
    app: Dict[str, Any] = Field(
        default_factory=lambda: {
            "name": "bm-sync",
            "version": "1.0.0",
            "log_level": "INFO",
        },
        description="应用配置"
    )
    solver: SolverConfig = Field(default_factory=SolverConfig, description="默认求解器配置")
    starts: int = Field(default=1, ge=1, description="默认多起点次数")
    jobs: int = Field(default=1, ge=1, description="扫描默认并行度")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "app": {"name": "bm-sync", "log_level": "INFO"},
                "solver": {"grad_tol": 1e-9, "curvature_tol": 1e-8},
                "starts": 3,
            }
        }
    )
