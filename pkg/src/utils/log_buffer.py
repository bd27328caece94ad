"""
日志缓冲区模块

把运行期间的日志记录保存在内存中，CLI 用它统计警告数并把警告写进报告。
"""

from __future__ import annotations

import logging
import threading
from collections import deque
from collections.abc import Iterator
from contextlib import contextmanager
from datetime import datetime

from pydantic import BaseModel

logger = logging.getLogger(__name__)

# LogRecord 的标准属性，其余视为 extra
_RECORD_ATTRS = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class LogEntry(BaseModel):
    """日志条目"""

    timestamp: datetime
    level: str
    levelno: int
    logger: str
    message: str
    extra: dict | None = None


class LogBuffer(logging.Handler):
    """
    自定义日志 Handler，将日志存储到有界内存缓冲区
    """

    def __init__(self, level: int = logging.WARNING, maxlen: int = 1000):
        super().__init__(level)
        self._buffer: deque[LogEntry] = deque(maxlen=maxlen)
        self._buffer_lock = threading.Lock()

    def emit(self, record: logging.LogRecord) -> None:
        try:
            extra = {
                k: v if isinstance(v, (int, float, str, bool, type(None))) else repr(v)
                for k, v in vars(record).items()
                if k not in _RECORD_ATTRS
            }
            entry = LogEntry(
                timestamp=datetime.fromtimestamp(record.created),
                level=logging.getLevelName(record.levelno),
                levelno=record.levelno,
                logger=record.name,
                message=record.getMessage(),
                extra=extra or None,
            )
            with self._buffer_lock:
                self._buffer.append(entry)
        except Exception:
            self.handleError(record)

    def get_logs(
        self,
        level: str | None = None,
        limit: int = 100,
        logger: str | None = None,
    ) -> list[LogEntry]:
        """
        获取日志条目

        Args:
            level: 日志级别过滤 (DEBUG, INFO, WARNING, ERROR)
            limit: 返回数量限制
            logger: 日志器名称过滤

        Returns:
            最新的 limit 条日志
        """
        with self._buffer_lock:
            logs = list(self._buffer)
        if level:
            logs = [log for log in logs if log.level == level.upper()]
        if logger:
            logs = [log for log in logs if logger.lower() in log.logger.lower()]
        return logs[-limit:]

    def count(self, min_level: int = logging.WARNING) -> int:
        with self._buffer_lock:
            return sum(1 for e in self._buffer if e.levelno >= min_level)

    def clear(self) -> None:
        with self._buffer_lock:
            self._buffer.clear()


@contextmanager
def capture_logs(level: int = logging.WARNING, name: str = "") -> Iterator[LogBuffer]:
    """在 with 块内把 level 及以上的日志收集到一个新的 LogBuffer"""
    buffer = LogBuffer(level)
    target = logging.getLogger(name)
    target.addHandler(buffer)
    try:
        yield buffer
    finally:
        target.removeHandler(buffer)
