"""
配置管理模块

- YAML 配置文件（默认 ~/.submatrix/config.yaml，可由 SM_CONFIG_DIR 指定目录）
- 环境变量覆盖

Usage:
    from src.config import get_config_manager

    config = get_config_manager().load_app_config()
    print(config.workers, config.suitesparse_url)
"""

from .base import AppConfigLoader, BaseConfigLoader, default_config_dir, validate_app_config
from .manager import (
    ENV_CACHE_DIR,
    ENV_SUITESPARSE_URL,
    ENV_WORKERS,
    ConfigManager,
    get_config_manager,
    reset_config_manager,
)
from .models import DEFAULT_SUITESPARSE_URL, AppConfig

__all__ = [
    # 模型
    "AppConfig",
    "DEFAULT_SUITESPARSE_URL",
    # 配置加载器
    "BaseConfigLoader",
    "AppConfigLoader",
    "default_config_dir",
    "validate_app_config",
    # 配置管理器
    "ConfigManager",
    "get_config_manager",
    "reset_config_manager",
    "ENV_CACHE_DIR",
    "ENV_SUITESPARSE_URL",
    "ENV_WORKERS",
]
