"""工具模块：矩阵缓存、SuiteSparse 下载、运行报告、日志缓冲"""

from .log_buffer import LogBuffer, LogEntry, capture_logs
from .matrix_cache import CacheEntry, MatrixCache
from .report import (
    HEADER,
    RunReport,
    dump_reports,
    export_reports_csv,
    parse_reports,
    read_reports,
    summarize_times,
    write_reports,
)
from .suitesparse import SuiteSparseFetcher, matrix_url

__all__ = [
    "CacheEntry",
    "HEADER",
    "LogBuffer",
    "LogEntry",
    "MatrixCache",
    "RunReport",
    "SuiteSparseFetcher",
    "capture_logs",
    "dump_reports",
    "export_reports_csv",
    "matrix_url",
    "parse_reports",
    "read_reports",
    "summarize_times",
    "write_reports",
]
