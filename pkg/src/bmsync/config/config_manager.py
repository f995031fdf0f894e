"""
配置管理器 - 负责加载、验证和管理配置
"""
import json
import os
import re
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from ..errors import InvalidParameterError, StorageError
from ..utils.logger import get_logger
from .schema import AppConfig, SweepSpec

_ENV_PATTERN = re.compile(r'\$\{([^}]+)\}')


def read_config_file(config_path: str) -> Dict[str, Any]:
    """读取 YAML/JSON 配置文件并替换 ${VAR} 环境变量"""
    path = Path(config_path)
    if not path.exists():
        raise StorageError(f"Config file not found: {config_path}")

    try:
        with open(path, 'r', encoding='utf-8') as f:
            if path.suffix in ['.yaml', '.yml']:
                config_dict = yaml.safe_load(f)
            elif path.suffix == '.json':
                config_dict = json.load(f)
            else:
                raise InvalidParameterError(f"Unsupported config file format: {path.suffix}")
    except OSError as e:
        raise StorageError(f"Failed to read config {config_path}: {e}") from e
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise InvalidParameterError(f"Config file {config_path} is not valid: {e}") from e

    if not config_dict:
        raise InvalidParameterError("Config file is empty")
    if not isinstance(config_dict, dict):
        raise InvalidParameterError("Config file must contain a mapping at top level")

    return replace_env_vars(config_dict)


def replace_env_vars(value: Any) -> Any:
    """替换环境变量"""
    if isinstance(value, str):
        def replace_match(match):
            env_value = os.getenv(match.group(1))
            if env_value is None:
                get_logger(__name__).warning(f"Environment variable {match.group(1)} not found")
                return match.group(0)  # 保持原样
            return env_value

        return _ENV_PATTERN.sub(replace_match, value)

    elif isinstance(value, dict):
        return {k: replace_env_vars(v) for k, v in value.items()}

    elif isinstance(value, list):
        return [replace_env_vars(item) for item in value]

    else:
        return value


def deep_merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    """深度合并字典"""
    result = base.copy()

    for key, value in update.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = value

    return result


def load_sweep_spec(spec_path: str) -> SweepSpec:
    """加载扫描配置；显式指定的文件出错时不回退到默认值"""
    logger = get_logger(__name__)
    spec = SweepSpec(**read_config_file(spec_path))
    logger.info(f"Sweep spec '{spec.name}' loaded from {spec_path}: "
                f"{len(spec.grid)} axes, {spec.trials_per_cell} trials per cell")
    return spec


class ConfigManager:
    """配置管理器"""

    def __init__(self, config_path: Optional[str] = None):
        self.logger = get_logger(__name__)
        self.config_path = config_path
        self.config: Optional[AppConfig] = None
        self.config_dict: Dict[str, Any] = {}

        # 加载环境变量
        load_dotenv()

        if config_path:
            # 显式指定的配置文件必须可用
            self.load_config(config_path)
        else:
            found = self._find_config_file()
            if found:
                self._load_or_default(found)
            else:
                self.logger.debug("No config file found, using default configuration")
                self.config = AppConfig()

    def _find_config_file(self) -> Optional[str]:
        """查找配置文件"""
        possible_paths = [
            "./configs/default_config.yaml",
            "./configs/config.yaml",
            "./bmsync.yaml",
            os.path.expanduser("~/.bmsync/config.yaml"),
        ]

        for path in possible_paths:
            if os.path.exists(path):
                self.logger.debug(f"Found config file: {path}")
                return path

        return None

    def _load_or_default(self, config_path: str) -> None:
        """自动发现的配置文件损坏时回退到默认配置"""
        try:
            self.load_config(config_path)
        except (InvalidParameterError, StorageError, ValueError) as e:
            self.logger.error(f"Failed to load config from {config_path}: {str(e)}")
            self.logger.info("Falling back to default configuration")
            self.config = AppConfig()

    def load_config(self, config_path: str) -> 'ConfigManager':
        """加载配置文件"""
        config_dict = read_config_file(config_path)
        self.config_path = config_path
        self.config_dict = config_dict

        # 文件中的字段覆盖默认值，再用 Pydantic 验证
        self.config = AppConfig(**deep_merge(AppConfig().model_dump(mode="json"), config_dict))

        self.logger.debug(f"Configuration loaded from {config_path}")
        return self

    def get_config(self) -> AppConfig:
        """获取配置对象"""
        if self.config is None:
            self.config = AppConfig()
        return self.config

