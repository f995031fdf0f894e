"""
环境变量设置（BMSYNC_ 前缀）
"""
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """从环境变量和 .env 读取的运行设置"""
    model_config = SettingsConfigDict(env_prefix="BMSYNC_", env_file=".env", extra="ignore")

    log_level: str = Field(default="INFO", description="日志级别")
    config_path: Optional[str] = Field(default=None, description="应用配置文件路径")
    jobs: Optional[int] = Field(default=None, ge=1, description="扫描并行度")
