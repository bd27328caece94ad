"""
异常定义模块

所有库内异常都继承 SubmatrixError，携带错误分类和 details 字典，
CLI 根据分类映射退出码。
"""

from __future__ import annotations

import copy
from enum import Enum
from typing import Any


class ErrorType(Enum):
    """统一的错误类型枚举"""

    INVALID_INPUT = "invalid_input"
    NUMERICAL = "numerical"
    CONVERGENCE = "convergence"
    IO = "io"
    NETWORK = "network"
    PARSE = "parse"


class SubmatrixError(Exception):
    """基础异常类"""

    error_type: ErrorType = ErrorType.INVALID_INPUT

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        return self.message

    def with_column(self, column: int) -> SubmatrixError:
        """返回附带列号的副本（保留原异常类型）"""
        tagged = copy.copy(self)
        tagged.details = {**self.details, "column": column}
        if hasattr(tagged, "column"):
            tagged.column = column  # type: ignore[attr-defined]
        tagged.message = f"列 {column}: {self.message}"
        tagged.args = (tagged.message,)
        return tagged


# === 输入与结构 ===


class IndexOutOfRange(SubmatrixError):
    """索引越界"""


class DuplicateEntry(SubmatrixError):
    """三元组中出现重复的 (row, col)"""


class InfeasibleSpec(SubmatrixError):
    """生成参数不可行"""


class InvalidConfig(SubmatrixError):
    """配置或参数非法"""


class LengthMismatch(SubmatrixError):
    """列数据长度与稀疏模式不一致"""


class SizeMismatch(SubmatrixError):
    """矩阵维度不一致"""


class NotSymmetric(SubmatrixError):
    """矩阵不对称"""


class DiagonalZero(SubmatrixError):
    """主对角元结构性为零"""

    def __init__(self, columns: list[int]):
        self.columns = sorted(columns)
        shown = ", ".join(str(c) for c in self.columns[:20])
        if len(self.columns) > 20:
            shown += ", ..."
        super().__init__(
            f"主对角元缺失的列: {shown}",
            details={"columns": self.columns},
        )


# === 数值 ===


class NumericalError(SubmatrixError):
    """数值计算异常基类"""

    error_type = ErrorType.NUMERICAL


class SingularMatrix(NumericalError):
    """奇异矩阵（主元为零）"""


class NotPositiveDefinite(NumericalError):
    """矩阵非正定"""

    def __init__(self, message: str, column: int | None = None, details: dict | None = None):
        self.column = column
        merged = dict(details or {})
        if column is not None:
            merged["column"] = column
        super().__init__(message, details=merged)


class BreakdownOnIndefinite(NumericalError):
    """逆迭代在非正定矩阵上失败"""


class CgBreakdown(NumericalError):
    """共轭梯度出现 p^T A p <= 0"""


class ZeroPivot(NumericalError):
    """ILU(0) 零主元"""

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"ILU(0) 在列 {column} 遇到零主元", details={"column": column})


# === 收敛 ===


class NoConvergence(SubmatrixError):
    """迭代未在上限内收敛，附带最佳估计"""

    error_type = ErrorType.CONVERGENCE

    def __init__(
        self,
        message: str,
        iterations: int,
        estimate: Any = None,
        details: dict | None = None,
    ):
        self.iterations = iterations
        self.estimate = estimate
        super().__init__(message, details={**(details or {}), "iterations": iterations})


class Diverged(SubmatrixError):
    """残差连续增大"""

    error_type = ErrorType.CONVERGENCE


# === I/O 与网络 ===


class UnsupportedFormat(SubmatrixError):
    """不支持的 Matrix Market 格式"""

    error_type = ErrorType.PARSE


class ParseError(SubmatrixError):
    """Matrix Market 解析错误（带行号）"""

    error_type = ErrorType.PARSE

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"第 {line} 行: {message}", details={"line": line})


class NetworkError(SubmatrixError):
    """网络异常"""

    error_type = ErrorType.NETWORK

    def __init__(self, message: str, status: int | None = None, url: str | None = None):
        self.status = status
        super().__init__(message, details={"status": status, "url": url})


class ChecksumOrParseError(SubmatrixError):
    """下载内容校验或解析失败"""

    error_type = ErrorType.IO


def exit_code_for(error: SubmatrixError) -> int:
    """CLI 退出码映射：网络 3，其余 1（参数错误由 argparse 返回 2）"""
    if error.error_type == ErrorType.NETWORK:
        return 3
    return 1


__all__ = [
    "BreakdownOnIndefinite",
    "CgBreakdown",
    "ChecksumOrParseError",
    "DiagonalZero",
    "Diverged",
    "DuplicateEntry",
    "ErrorType",
    "IndexOutOfRange",
    "InfeasibleSpec",
    "InvalidConfig",
    "LengthMismatch",
    "NetworkError",
    "NoConvergence",
    "NotPositiveDefinite",
    "NotSymmetric",
    "NumericalError",
    "ParseError",
    "SingularMatrix",
    "SizeMismatch",
    "SubmatrixError",
    "UnsupportedFormat",
    "ZeroPivot",
    "exit_code_for",
]
