# -*- coding: utf-8 -*-
from __future__ import annotations

import os
import sys
from pathlib import Path
from typing import Optional

from loguru import logger


def _normalize_level(level: Optional[str]) -> str:
    """标准化日志级别（内部辅助）"""
    return (level or "INFO").upper()


def configure_logger(level: str = "INFO"):
    """配置日志

    stdout 只留给 JSON 输出，日志一律写 stderr；
    设置了 IDEMSYS_LOGS_DIR 时另写一份滚动文件日志。
    """
    try:
        logger.remove()
    except Exception:
        pass
    normalized_level = _normalize_level(level)
    logger.add(sys.stderr, level=normalized_level)

    logs_dir = os.getenv("IDEMSYS_LOGS_DIR")
    if logs_dir:
        logs_path = Path(logs_dir)
        logs_path.mkdir(parents=True, exist_ok=True)
        logger.add(str(logs_path / "idemsys.log"), rotation="5 MB", retention=5, enqueue=True,
                   encoding="utf-8", level=normalized_level)
    return logger
