"""
实例生成器工厂
"""
from typing import Any, Dict, Type, Union

from pydantic import ValidationError

from ..config.schema import ModelParams, model_params_from_dict
from ..core.models import ProblemInstance
from ..errors import InvalidParameterError
from ..utils.logger import get_logger
from .base import BaseGenerator
from .er_bernoulli import ErBernoulliGenerator
from .gaussian import GaussianGenerator
from .sbm import SbmGenerator


class InstanceFactory:
    """按模型名创建生成器"""

    _logger = get_logger(__name__)

    _registry: Dict[str, Type[BaseGenerator]] = {
        "gaussian": GaussianGenerator,
        "erbern": ErBernoulliGenerator,
        "sbm": SbmGenerator,
    }

    @classmethod
    def register(cls, model: str, generator_cls: Type[BaseGenerator]) -> None:
        """注册新的生成器"""
        cls._registry[model] = generator_cls
        cls._logger.info(f"Registered generator for model: {model}")

    @classmethod
    def available_models(cls):
        return sorted(cls._registry)

    @classmethod
    def create(cls, params: Union[ModelParams, Dict[str, Any]]) -> BaseGenerator:
        """创建生成器实例"""
        if isinstance(params, dict):
            try:
                params = model_params_from_dict(params)
            except ValidationError as e:
                errors = "; ".join(err["msg"] for err in e.errors())
                raise InvalidParameterError(f"Invalid model parameters: {errors}") from e

        generator_cls = cls._registry.get(params.model)
        if generator_cls is None:
            raise InvalidParameterError(
                f"No generator for model '{params.model}'. Available: {cls.available_models()}",
                field="model")
        cls._logger.debug(f"Creating generator: {generator_cls.__name__}")
        return generator_cls(params)


def generate(params: Union[ModelParams, Dict[str, Any]], seed: int) -> ProblemInstance:
    """按参数生成实例"""
    return InstanceFactory.create(params).generate(seed)
