import logging
import sys
from typing import Optional, Union

import colorlog

_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
_DATEFMT = '%Y-%m-%d %H:%M:%S'
_ROOT = "bmsync"
_default_level = logging.INFO


def _make_formatter() -> logging.Formatter:
    """终端输出彩色日志，重定向时退回普通格式"""
    if sys.stdout.isatty():
        return colorlog.ColoredFormatter(
            '%(log_color)s' + _FORMAT,
            datefmt=_DATEFMT,
            log_colors={
                'DEBUG': 'cyan',
                'INFO': 'green',
                'WARNING': 'yellow',
                'ERROR': 'red',
                'CRITICAL': 'red,bg_white',
            },
        )
    return logging.Formatter(_FORMAT, datefmt=_DATEFMT)


def get_logger(name: str, level: Optional[int] = None) -> logging.Logger:
    """获取日志记录器"""
    logger = logging.getLogger(name)

    if not logger.handlers:
        logger.setLevel(level or _default_level)

        # 控制台处理器
        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setLevel(logging.DEBUG)
        console_handler.setFormatter(_make_formatter())

        logger.addHandler(console_handler)
        logger.propagate = False

    return logger


def set_log_level(level: Union[int, str]) -> None:
    """调整所有 bmsync 日志记录器的级别"""
    global _default_level
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level: {level}")
    _default_level = level

    for name, logger in logging.Logger.manager.loggerDict.items():
        if isinstance(logger, logging.Logger) and (name == _ROOT or name.startswith(_ROOT + ".")):
            logger.setLevel(level)
