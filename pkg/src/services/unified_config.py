# -*- coding: utf-8 -*-
"""
统一配置管理服务

加载顺序（后者覆盖前者）：
1. AppConfig 数据类默认值
2. JSON 配置文件（IDEMSYS_CONFIG 指定，缺省为 ./config.json）
3. 环境变量 IDEMSYS_<FIELD>（启动时先执行 load_dotenv()）

使用方式：
    from services.unified_config import get_config, update_config

    cfg = get_config()
    update_config(enumerate_budget=1000)
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from loguru import logger

ENV_PREFIX = "IDEMSYS_"


@dataclass
class AppConfig:
    """应用配置（唯一定义）"""
    # 日志与输出
    log_level: str = "INFO"
    output_format: str = "json"

    # 枚举
    enumerate_budget: int = 10_000_000
    max_workers: int = 4

    # 半单分解的分离元搜索
    separator_attempts: int = 64
    separator_seed: int = 20240601
    separator_coefficient_bound: int = 3


def _coerce(raw: str, default: Any) -> Any:
    """把环境变量字符串转成与默认值相同的类型"""
    if isinstance(default, bool):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(raw.replace("_", ""))
    return raw


class ConfigService:
    """配置服务（单例）"""

    _instance: Optional['ConfigService'] = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._config: Optional[AppConfig] = None
        self._config_lock = threading.Lock()
        self._initialized = True
        self._load()

    def _config_path(self) -> Optional[Path]:
        explicit = os.getenv(f"{ENV_PREFIX}CONFIG")
        if explicit:
            return Path(explicit)
        candidate = Path.cwd() / "config.json"
        return candidate if candidate.exists() else None

    def _read_file(self) -> Dict[str, Any]:
        path = self._config_path()
        if path is None:
            return {}
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"[Config] 读取 {path} 失败: {e}")
            return {}
        if not isinstance(data, dict):
            logger.warning(f"[Config] {path} 顶层不是对象，已忽略")
            return {}
        return self._typed(str(path), data)

    def _typed(self, source: str, values: Dict[str, Any]) -> Dict[str, Any]:
        """按 AppConfig 默认值的类型转换，无法转换的项丢弃"""
        defaults = asdict(AppConfig())
        typed: Dict[str, Any] = {}
        for name, value in values.items():
            default = defaults.get(name)
            if name not in defaults or type(value) is type(default):
                typed[name] = value
                continue
            try:
                typed[name] = _coerce(str(value), default)
            except ValueError:
                logger.warning(f"[Config] {source} 中 {name}={value!r} 无法解析，已忽略")
        return typed

    def _read_env(self) -> Dict[str, Any]:
        values: Dict[str, Any] = {}
        defaults = asdict(AppConfig())
        for name, default in defaults.items():
            raw = os.getenv(f"{ENV_PREFIX}{name.upper()}")
            if raw is None:
                continue
            try:
                values[name] = _coerce(raw, default)
            except ValueError:
                logger.warning(f"[Config] 环境变量 {ENV_PREFIX}{name.upper()}={raw!r} 无法解析，已忽略")
        return values

    def _load(self):
        """按 默认值 → 文件 → 环境变量 的顺序合并"""
        with self._config_lock:
            load_dotenv()
            merged = asdict(AppConfig())
            merged.update(self._read_file())
            merged.update(self._read_env())

            valid_fields = {f.name for f in fields(AppConfig)}
            unknown = set(merged) - valid_fields
            if unknown:
                logger.debug(f"[Config] 过滤未知字段: {unknown}")
            self._config = AppConfig(**{k: v for k, v in merged.items() if k in valid_fields})

    @property
    def cfg(self) -> AppConfig:
        if self._config is None:
            self._load()
        return self._config

    def get(self, key: str, default: Any = None) -> Any:
        return getattr(self.cfg, key, default)

    def update(self, **kwargs) -> AppConfig:
        """只修改内存中的配置（单次调用生效）"""
        with self._config_lock:
            for key, value in kwargs.items():
                if value is None:
                    continue
                if hasattr(self._config, key):
                    setattr(self._config, key, value)
                else:
                    logger.warning(f"[Config] 未知配置项: {key}")
            return self._config

    def reload(self) -> AppConfig:
        self._load()
        return self._config

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self.cfg)


# ==================== 全局访问函数 ====================

def get_config_service() -> ConfigService:
    return ConfigService()


def get_config() -> AppConfig:
    """获取配置"""
    return get_config_service().cfg


def update_config(**kwargs) -> AppConfig:
    """更新配置"""
    return get_config_service().update(**kwargs)


def reload_config() -> AppConfig:
    """重新加载配置"""
    return get_config_service().reload()
