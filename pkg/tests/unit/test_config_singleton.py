# -*- coding: utf-8 -*-
"""
统一配置服务单元测试
"""

import json
import sys
from pathlib import Path

# 添加src到路径
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

import pytest

from services.unified_config import AppConfig, get_config, get_config_service, reload_config, update_config


@pytest.fixture(autouse=True)
def clean_config(monkeypatch, tmp_path):
    """隔离环境变量与工作目录，测试结束后恢复默认配置"""
    for name in AppConfig.__dataclass_fields__:
        monkeypatch.delenv(f"IDEMSYS_{name.upper()}", raising=False)
    monkeypatch.delenv("IDEMSYS_CONFIG", raising=False)
    monkeypatch.chdir(tmp_path)
    reload_config()
    yield
    monkeypatch.undo()
    reload_config()


class TestConfigService:
    """ConfigService 测试类"""

    def test_singleton_pattern(self):
        """多次获取返回同一实例"""
        assert get_config_service() is get_config_service()

    def test_default_values(self):
        cfg = get_config()
        assert cfg.log_level == "INFO"
        assert cfg.output_format == "json"
        assert cfg.enumerate_budget == 10_000_000
        assert cfg.max_workers > 0
        assert cfg.separator_attempts > 0

    def test_update_in_memory(self):
        update_config(enumerate_budget=123, max_workers=None)
        cfg = get_config()
        assert cfg.enumerate_budget == 123
        assert cfg.max_workers == AppConfig().max_workers

    def test_update_ignores_unknown_key(self):
        update_config(no_such_field=1)
        assert not hasattr(get_config(), "no_such_field")

    # ============= 加载顺序 =============

    def test_file_overrides_defaults(self, tmp_path, monkeypatch):
        path = tmp_path / "custom.json"
        path.write_text(json.dumps({"max_workers": 2, "unknown": True}), encoding="utf-8")
        monkeypatch.setenv("IDEMSYS_CONFIG", str(path))
        assert reload_config().max_workers == 2

    def test_cwd_config_file(self, tmp_path):
        (tmp_path / "config.json").write_text(json.dumps({"separator_seed": 7}), encoding="utf-8")
        assert reload_config().separator_seed == 7

    def test_env_overrides_file(self, tmp_path, monkeypatch):
        (tmp_path / "config.json").write_text(json.dumps({"max_workers": 2}), encoding="utf-8")
        monkeypatch.setenv("IDEMSYS_MAX_WORKERS", "6")
        monkeypatch.setenv("IDEMSYS_ENUMERATE_BUDGET", "1_000")
        cfg = reload_config()
        assert cfg.max_workers == 6
        assert cfg.enumerate_budget == 1000

    def test_bad_env_value_ignored(self, monkeypatch):
        monkeypatch.setenv("IDEMSYS_MAX_WORKERS", "many")
        assert reload_config().max_workers == AppConfig().max_workers

    def test_broken_file_ignored(self, tmp_path):
        (tmp_path / "config.json").write_text("{not json", encoding="utf-8")
        assert reload_config().log_level == "INFO"

    def test_file_values_coerced(self, tmp_path):
        """文件中的字符串按字段类型转换，无法转换的丢弃"""
        (tmp_path / "config.json").write_text(
            json.dumps({"enumerate_budget": "100", "max_workers": "many", "log_level": "DEBUG"}),
            encoding="utf-8",
        )
        cfg = reload_config()
        assert cfg.enumerate_budget == 100
        assert cfg.max_workers == AppConfig().max_workers
        assert cfg.log_level == "DEBUG"
