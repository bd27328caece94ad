"""
SuiteSparse 矩阵文件缓存

每个条目是 <name>.mtx 与同名 JSON 元数据文件；条目不过期，
读取时校验 sha256，不一致视为未命中。
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
import shutil
from datetime import datetime
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

logger = logging.getLogger(__name__)

_SAFE_NAME = re.compile(r"^[A-Za-z0-9_.+-]+$")


class CacheEntry(BaseModel):
    """缓存元数据"""

    group: str
    name: str
    url: str
    sha256: str
    size_bytes: int
    fetched_at: datetime


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


class MatrixCache:
    """矩阵文件缓存管理器"""

    def __init__(self, cache_dir: str | Path):
        self.cache_dir = Path(cache_dir)

    def _ensure_cache_dir(self) -> None:
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def _check_name(name: str) -> str:
        if not _SAFE_NAME.match(name):
            raise ValueError(f"非法矩阵名: {name!r}")
        return name

    def matrix_path(self, name: str) -> Path:
        return self.cache_dir / f"{self._check_name(name)}.mtx"

    def _meta_path(self, name: str) -> Path:
        return self.cache_dir / f"{self._check_name(name)}.json"

    def entry(self, name: str) -> CacheEntry | None:
        """读取元数据，不存在或无法解析时返回 None"""
        meta = self._meta_path(name)
        if not meta.exists():
            return None
        try:
            return CacheEntry.model_validate_json(meta.read_text(encoding="utf-8"))
        except (ValidationError, OSError) as e:
            logger.warning("缓存元数据无法读取", extra={"matrix_name": name, "error": str(e)})
            return None

    def get(self, name: str) -> Path | None:
        """
        获取缓存的矩阵文件

        Returns:
            Path: 命中时返回 .mtx 路径；未命中或校验失败返回 None
        """
        path = self.matrix_path(name)
        entry = self.entry(name)
        if entry is None or not path.exists():
            return None
        try:
            digest = sha256_file(path)
        except OSError as e:
            logger.warning("缓存文件读取失败", extra={"matrix_name": name, "error": str(e)})
            return None
        if digest != entry.sha256:
            logger.warning(
                "缓存文件校验失败，视为未命中",
                extra={"matrix_name": name, "expected": entry.sha256, "actual": digest},
            )
            return None
        return path

    def put(self, group: str, name: str, url: str, source: Path) -> Path:
        """
        把已下载的矩阵文件移入缓存并写入元数据

        Returns:
            Path: 缓存中的 .mtx 路径
        """
        self._ensure_cache_dir()
        target = self.matrix_path(name)
        shutil.move(str(source), target)
        entry = CacheEntry(
            group=group,
            name=name,
            url=url,
            sha256=sha256_file(target),
            size_bytes=target.stat().st_size,
            fetched_at=datetime.now(),
        )
        try:
            self._meta_path(name).write_text(entry.model_dump_json(indent=2), encoding="utf-8")
        except OSError as e:
            logger.warning("缓存元数据写入失败", extra={"matrix_name": name, "error": str(e)})
        return target

    def list_entries(self) -> list[CacheEntry]:
        if not self.cache_dir.exists():
            return []
        entries = []
        for meta in sorted(self.cache_dir.glob("*.json")):
            entry = self.entry(meta.stem)
            if entry is not None:
                entries.append(entry)
        return entries

    def clear(self, name: str | None = None) -> int:
        """
        清除缓存

        Args:
            name: 要清除的矩阵名，None 表示全部

        Returns:
            int: 删除的文件数
        """
        if not self.cache_dir.exists():
            return 0
        if name is None:
            targets = [*self.cache_dir.glob("*.mtx"), *self.cache_dir.glob("*.json")]
        else:
            targets = [self.matrix_path(name), self._meta_path(name)]
        removed = 0
        for path in targets:
            try:
                if path.exists():
                    path.unlink()
                    removed += 1
            except OSError as e:
                logger.warning("缓存删除失败", extra={"path": str(path), "error": str(e)})
        return removed

    def get_stats(self) -> dict[str, Any]:
        """缓存统计信息"""
        entries = self.list_entries()
        return {
            "cache_dir": str(self.cache_dir),
            "entries": len(entries),
            "total_size_bytes": sum(e.size_bytes for e in entries),
            "names": [e.name for e in entries],
        }
