"""
配置管理器模块

加载顺序：内置默认值 → config.yaml → 环境变量（SM_SUITESPARSE_URL / SM_CACHE_DIR / SM_WORKERS）。
命令行参数在 CLI 中最后覆盖。
"""

from __future__ import annotations

import dataclasses
import logging
import os
from pathlib import Path

from src.errors import InvalidConfig

from .base import AppConfigLoader, default_config_dir, validate_app_config
from .models import AppConfig

logger = logging.getLogger(__name__)

ENV_SUITESPARSE_URL = "SM_SUITESPARSE_URL"
ENV_CACHE_DIR = "SM_CACHE_DIR"
ENV_WORKERS = "SM_WORKERS"


_config_manager_instance: ConfigManager | None = None


def get_config_manager(config_dir: str | None = None) -> ConfigManager:
    """
    获取 ConfigManager 单例

    Args:
        config_dir: 配置目录（仅首次调用时生效）
    """
    global _config_manager_instance
    if _config_manager_instance is None:
        _config_manager_instance = ConfigManager(config_dir)
    return _config_manager_instance


def reset_config_manager() -> None:
    """重置配置管理器单例（用于测试）"""
    global _config_manager_instance
    _config_manager_instance = None


class ConfigManager:
    """配置管理器"""

    def __init__(self, config_dir: str | None = None):
        self._config_dir = config_dir or default_config_dir()
        self._app_config = AppConfigLoader(self._config_dir)

    def load_app_config(self, apply_env: bool = True) -> AppConfig:
        """
        加载应用主配置

        Args:
            apply_env: 是否应用环境变量覆盖

        Raises:
            InvalidConfig: 配置文件或环境变量非法
        """
        config = self._app_config.load()
        if apply_env:
            config = self._apply_env(config)
        if not config.cache_dir:
            config = dataclasses.replace(config, cache_dir=str(Path(self._config_dir) / "suitesparse"))
        return config

    def save_app_config(self, config: AppConfig) -> None:
        validate_app_config(config)
        self._app_config.save(config)

    def _apply_env(self, config: AppConfig) -> AppConfig:
        overrides: dict[str, object] = {}
        if url := os.environ.get(ENV_SUITESPARSE_URL):
            overrides["suitesparse_url"] = url
        if cache := os.environ.get(ENV_CACHE_DIR):
            overrides["cache_dir"] = cache
        if workers := os.environ.get(ENV_WORKERS):
            try:
                overrides["workers"] = int(workers)
            except ValueError:
                raise InvalidConfig(f"{ENV_WORKERS} 不是整数: {workers!r}") from None
        if not overrides:
            return config
        logger.debug("应用环境变量覆盖", extra={"keys": sorted(overrides)})
        config = dataclasses.replace(config, **overrides)  # type: ignore[arg-type]
        validate_app_config(config)
        return config

    def backup(self) -> str:
        return self._app_config.backup()

    def get_config_dir(self) -> str:
        return self._config_dir

    @property
    def config_path(self) -> str:
        return self._app_config.path
