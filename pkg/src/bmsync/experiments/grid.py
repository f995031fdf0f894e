"""
网格展开与种子派生

单元按轴名字典序排列的笛卡尔积展开；单元种子只取决于 (master_seed, 单元键)，
试验种子只取决于 (单元种子, 试验编号)，增删单元或增加试验次数不会改变已有记录。
"""
import itertools
import math
import re
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from ..config.schema import ModelParams, SweepSpec, model_params_from_dict
from ..errors import InvalidParameterError
from ..solver.ascent import default_rank
from ..utils.rng import derive_seed

Cell = Dict[str, Any]

# 直接覆盖模板字段的轴
DIRECT_AXES = ("n", "sigma", "p", "q", "delta", "centering")
_UNSAFE = re.compile(r"[^A-Za-z0-9._=+-]")


def format_value(value: Any) -> str:
    """单元坐标的规范文本；CSV 与单元键共用"""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def expand_grid(spec: SweepSpec) -> List[Cell]:
    """展开网格；轴按名称字典序，取值保持给定顺序"""
    axes = sorted(spec.grid)
    return [dict(zip(axes, values)) for values in itertools.product(*(spec.grid[a] for a in axes))]


def cell_key(cell: Cell) -> str:
    """可作文件名的单元键，如 a=16.0__b=4"""
    parts = [f"{axis}={format_value(cell[axis])}" for axis in sorted(cell)]
    return _UNSAFE.sub("_", "__".join(parts))


def cell_seed(master_seed: int, cell: Cell) -> int:
    return derive_seed(master_seed, "cell", cell_key(cell))


def trial_seed(master_seed: int, cell: Cell, trial: int) -> int:
    return derive_seed(cell_seed(master_seed, cell), "trial", trial)


def cell_params(spec: SweepSpec, cell: Cell) -> Tuple[ModelParams, int]:
    """
    网格单元对应的 (模型参数, 秩)

    派生轴：a → p = a·log n / n，b → q = b·log n / n，sigma_scale → σ = s·√(n / (2 log n))。
    """
    data: Dict[str, Any] = dict(spec.model)
    for axis in DIRECT_AXES:
        if axis in cell:
            data[axis] = cell[axis]

    n = data.get("n")
    derived = [axis for axis in ("a", "b", "sigma_scale") if axis in cell]
    if derived:
        if not isinstance(n, int) or n < 2:
            raise InvalidParameterError(f"derived axes {derived} need an integer n >= 2", field="n")
        scale = math.log(n) / n
        if "a" in cell:
            data["p"] = float(cell["a"]) * scale
        if "b" in cell:
            data["q"] = float(cell["b"]) * scale
        if "sigma_scale" in cell:
            data["sigma"] = float(cell["sigma_scale"]) * math.sqrt(n / (2.0 * math.log(n)))

    try:
        params = model_params_from_dict(data)
    except ValidationError as e:
        raise InvalidParameterError(f"cell {cell_key(cell)} has invalid parameters: "
                                    f"{e.errors()[0]['msg']}", field="grid") from e

    r: Optional[int] = cell.get("r", spec.r)
    if r is None:
        r = default_rank(params.n)
    return params, int(r)
