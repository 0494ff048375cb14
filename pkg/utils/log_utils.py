"""
日志配置
"""

import logging
from typing import Optional

import config


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """按 config.LOG_CONFIG 初始化根日志器，命令行参数优先"""
    level_name = (level or config.LOG_CONFIG['level']).upper()
    handlers = [logging.StreamHandler()]
    target_file = log_file or config.LOG_CONFIG.get('file')
    if target_file:
        handlers.append(logging.FileHandler(target_file, encoding='utf-8'))
    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        format=config.LOG_CONFIG['format'],
        handlers=handlers,
        force=True,
    )
