"""
配置基类模块
定义 YAML 配置文件的加载和保存基类
"""

import os
import shutil
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Generic, TypeVar

import yaml

from src.errors import InvalidConfig
from src.kernels.eig import EigSolver
from src.scheduler.plans import Strategy

from .models import AppConfig

T = TypeVar("T")

CONFIG_DIR_ENV = "SM_CONFIG_DIR"


def default_config_dir() -> str:
    """$SM_CONFIG_DIR，否则 ~/.submatrix"""
    return os.environ.get(CONFIG_DIR_ENV) or str(Path.home() / ".submatrix")


class BaseConfigLoader(ABC, Generic[T]):
    """配置加载器基类"""

    def __init__(self, config_path: str, config_dir: str | None = None):
        """
        Args:
            config_path: 配置文件名（如 config.yaml）
            config_dir: 配置目录，默认见 default_config_dir()
        """
        self._config_dir = config_dir or default_config_dir()
        self._config_path = os.path.join(self._config_dir, config_path)

    @property
    def path(self) -> str:
        return self._config_path

    def _ensure_config_dir(self) -> None:
        Path(self._config_dir).mkdir(parents=True, exist_ok=True)

    def _load_yaml(self) -> dict:
        """加载 YAML 文件，文件不存在时返回空字典"""
        try:
            with open(self._config_path, encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except FileNotFoundError:
            return {}
        except yaml.YAMLError as e:
            raise InvalidConfig(f"YAML 解析错误: {e}", details={"path": self._config_path}) from e
        if not isinstance(data, dict):
            raise InvalidConfig("配置文件顶层必须是映射", details={"path": self._config_path})
        return data

    def _save_yaml(self, data: Any) -> None:
        self._ensure_config_dir()
        with open(self._config_path, "w", encoding="utf-8") as f:
            yaml.safe_dump(data, f, allow_unicode=True, indent=2, sort_keys=False)

    def load(self) -> T:
        return self._parse(self._load_yaml())

    def save(self, config: T) -> None:
        self._save_yaml(self._serialize(config))

    def exists(self) -> bool:
        return os.path.exists(self._config_path)

    def backup(self) -> str:
        """备份配置文件，返回备份路径（文件不存在时返回空字符串）"""
        if self.exists():
            backup_path = f"{self._config_path}.backup"
            shutil.copy2(self._config_path, backup_path)
            return backup_path
        return ""

    @abstractmethod
    def _parse(self, data: dict) -> T:
        """解析 YAML 数据为配置对象"""

    @abstractmethod
    def _serialize(self, config: T) -> dict:
        """将配置对象序列化为字典"""


def _coerce(name: str, value: Any, kind: type) -> Any:
    try:
        if kind is int and isinstance(value, float) and not value.is_integer():
            raise ValueError(value)
        return kind(value)
    except (TypeError, ValueError):
        raise InvalidConfig(f"配置项 {name} 类型错误: {value!r}", details={"key": name}) from None


class AppConfigLoader(BaseConfigLoader[AppConfig]):
    """应用主配置加载器"""

    def __init__(self, config_dir: str | None = None):
        super().__init__("config.yaml", config_dir)

    def _parse(self, data: dict) -> AppConfig:
        unknown = set(data) - set(AppConfig.field_names())
        if unknown:
            raise InvalidConfig(f"未知配置项: {', '.join(sorted(unknown))}")
        d = AppConfig()
        config = AppConfig(
            workers=_coerce("workers", data.get("workers", d.workers), int),
            strategy=str(data.get("strategy", d.strategy)),
            chunk=_coerce("chunk", data.get("chunk", d.chunk), int),
            shuffle_seed=_coerce("shuffle_seed", data.get("shuffle_seed", d.shuffle_seed), int),
            eig_solver=str(data.get("eig_solver", d.eig_solver)),
            cg_tol=_coerce("cg_tol", data.get("cg_tol", d.cg_tol), float),
            cache_dir=str(data.get("cache_dir") or ""),
            suitesparse_url=str(data.get("suitesparse_url", d.suitesparse_url)),
            http_timeout=_coerce("http_timeout", data.get("http_timeout", d.http_timeout), float),
            report_precision=_coerce(
                "report_precision", data.get("report_precision", d.report_precision), int
            ),
        )
        validate_app_config(config)
        return config

    def _serialize(self, config: AppConfig) -> dict:
        return {name: getattr(config, name) for name in AppConfig.field_names()}


def validate_app_config(config: AppConfig) -> None:
    """
    Raises:
        InvalidConfig: 取值非法
    """
    if config.workers < 1:
        raise InvalidConfig(f"workers 必须 ≥ 1，得到 {config.workers}")
    if config.chunk < 1:
        raise InvalidConfig(f"chunk 必须 ≥ 1，得到 {config.chunk}")
    if config.strategy not in {s.value for s in Strategy}:
        raise InvalidConfig(f"未知调度策略: {config.strategy}")
    if config.eig_solver not in {s.value for s in EigSolver}:
        raise InvalidConfig(f"未知特征分解实现: {config.eig_solver}")
    if config.cg_tol <= 0:
        raise InvalidConfig(f"cg_tol 必须为正，得到 {config.cg_tol}")
    if config.http_timeout <= 0:
        raise InvalidConfig(f"http_timeout 必须为正，得到 {config.http_timeout}")
    if not (1 <= config.report_precision <= 17):
        raise InvalidConfig(f"report_precision 必须在 [1, 17]，得到 {config.report_precision}")
