"""
Matrix Market 读写

支持 coordinate real（以及 integer）矩阵的 symmetric / general 两种对称类型。
symmetric 文件只存下三角，读入时镜像到上三角。
"""

from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import TextIO

import numpy as np

from src.errors import ParseError, UnsupportedFormat

from .matrix import CscMatrix, csc_from_arrays

logger = logging.getLogger(__name__)

HEADER_PREFIX = "%%matrixmarket"
SUPPORTED_FIELDS = ("real", "integer")
SUPPORTED_SYMMETRY = ("symmetric", "general")


def _parse_header(line: str) -> str:
    """解析首行，返回对称类型"""
    tokens = line.strip().lower().split()
    if not tokens or tokens[0] != HEADER_PREFIX:
        raise ParseError("缺少 %%MatrixMarket 头", line=1)
    if len(tokens) != 5:
        raise ParseError(f"头部字段数应为 5，实际 {len(tokens)}", line=1)
    _, obj, fmt, fld, symmetry = tokens
    if obj != "matrix":
        raise UnsupportedFormat(f"不支持的对象类型: {obj}")
    if fmt != "coordinate":
        raise UnsupportedFormat(f"不支持的存储格式: {fmt}")
    if fld not in SUPPORTED_FIELDS:
        raise UnsupportedFormat(f"不支持的数值类型: {fld}")
    if symmetry not in SUPPORTED_SYMMETRY:
        raise UnsupportedFormat(f"不支持的对称类型: {symmetry}")
    return symmetry


def read_matrix_market(stream: TextIO | str) -> CscMatrix:
    """
    读取 Matrix Market 文本

    Args:
        stream: 文本流或完整文本

    Returns:
        CscMatrix: 读取的矩阵，文件索引由 1 起转换为 0 起

    Raises:
        UnsupportedFormat: pattern/complex/array 等格式
        ParseError: 内容错误（带行号）
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)

    lineno = 1
    header = stream.readline()
    symmetry = _parse_header(header)

    size: tuple[int, int, int] | None = None
    rows: np.ndarray | None = None
    cols: np.ndarray | None = None
    vals: np.ndarray | None = None
    count = 0

    for raw in stream:
        lineno += 1
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        if size is None:
            if len(parts) != 3:
                raise ParseError("尺寸行应为 'rows cols nnz'", line=lineno)
            try:
                nr, nc, nnz = (int(p) for p in parts)
            except ValueError:
                raise ParseError(f"尺寸行无法解析: {line!r}", line=lineno) from None
            if nr != nc:
                raise UnsupportedFormat(f"只支持方阵，得到 {nr}×{nc}")
            if nr < 0 or nnz < 0:
                raise ParseError("尺寸为负数", line=lineno)
            size = (nr, nc, nnz)
            rows = np.empty(nnz, dtype=np.int64)
            cols = np.empty(nnz, dtype=np.int64)
            vals = np.empty(nnz, dtype=np.float64)
            continue

        assert rows is not None and cols is not None and vals is not None
        if count >= size[2]:
            raise ParseError(f"元素个数超过声明的 {size[2]}", line=lineno)
        if len(parts) != 3:
            raise ParseError(f"元素行应为 'i j value'，实际 {line!r}", line=lineno)
        try:
            i, j, v = int(parts[0]) - 1, int(parts[1]) - 1, float(parts[2])
        except ValueError:
            raise ParseError(f"元素行无法解析: {line!r}", line=lineno) from None
        if not (0 <= i < size[0] and 0 <= j < size[0]):
            raise ParseError(f"索引 ({i + 1}, {j + 1}) 越界", line=lineno)
        if symmetry == "symmetric" and i < j:
            raise ParseError("symmetric 文件只允许存储下三角", line=lineno)
        rows[count], cols[count], vals[count] = i, j, v
        count += 1

    if size is None:
        raise ParseError("缺少尺寸行", line=lineno)
    if count != size[2]:
        raise ParseError(f"声明 {size[2]} 个元素，只读到 {count} 个", line=lineno)

    assert rows is not None and cols is not None and vals is not None
    n = size[0]
    if symmetry == "symmetric":
        off = rows != cols
        rows, cols, vals = (
            np.concatenate([rows, cols[off]]),
            np.concatenate([cols, rows[off]]),
            np.concatenate([vals, vals[off]]),
        )
        matrix = csc_from_arrays(rows, cols, vals, n, symmetric=True)
    else:
        matrix = csc_from_arrays(rows, cols, vals, n)

    logger.debug(
        "读取 Matrix Market 完成",
        extra={"n": n, "nnz": matrix.nnz, "symmetry": symmetry},
    )
    return matrix


def write_matrix_market(matrix: CscMatrix) -> str:
    """
    输出 Matrix Market 文本

    对称矩阵以 symmetric 下三角形式输出；数值用 repr 输出（最短可精确往返表示，
    不超过 17 位有效数字），保证 read(write(M)) 逐位相等。
    """
    n = matrix.n
    counts = matrix.column_counts()
    cols = np.repeat(np.arange(n, dtype=np.int64), counts)
    rows = matrix.row_ind
    vals = matrix.val
    symmetric = bool(matrix.symmetric)
    if symmetric:
        keep = rows >= cols
        rows, cols, vals = rows[keep], cols[keep], vals[keep]

    out = io.StringIO()
    out.write(
        f"%%MatrixMarket matrix coordinate real {'symmetric' if symmetric else 'general'}\n"
    )
    out.write(f"{n} {n} {rows.shape[0]}\n")
    for i, j, v in zip(rows.tolist(), cols.tolist(), vals.tolist(), strict=True):
        out.write(f"{i + 1} {j + 1} {v!r}\n")
    return out.getvalue()


def load_matrix(path: str | Path) -> CscMatrix:
    """从文件读取矩阵"""
    with open(path, encoding="utf-8") as f:
        return read_matrix_market(f)


def save_matrix(matrix: CscMatrix, path: str | Path) -> Path:
    """写入矩阵文件，自动创建父目录"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(write_matrix_market(matrix))
    return path
