"""
结果矩阵组装与对称化
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
import scipy.sparse as sp

from src.errors import LengthMismatch, NotSymmetric
from src.sparse_core.matrix import CscMatrix


def assemble_result(a: CscMatrix, columns: Sequence[npt.ArrayLike]) -> CscMatrix:
    """
    拼接各列结果，复用 A 的 col_ptr 与 row_ind

    Args:
        a: 输入矩阵
        columns: columns[j] 的长度等于 A 第 j 列的非零元个数

    Returns:
        CscMatrix: 与 A 稀疏模式完全相同的结果

    Raises:
        LengthMismatch: 列数或某列长度不符
    """
    if len(columns) != a.n:
        raise LengthMismatch(
            f"需要 {a.n} 列结果，得到 {len(columns)}",
            details={"expected": a.n, "actual": len(columns)},
        )
    counts = a.column_counts()
    parts = [np.asarray(c, dtype=np.float64).ravel() for c in columns]
    lengths = np.fromiter((p.shape[0] for p in parts), dtype=np.int64, count=len(parts))
    bad = np.flatnonzero(lengths != counts)
    if bad.size:
        j = int(bad[0])
        raise LengthMismatch(
            f"列 {j} 长度为 {int(lengths[j])}，应为 {int(counts[j])}",
            details={"column": j, "expected": int(counts[j]), "actual": int(lengths[j])},
        )
    val = np.concatenate(parts) if parts else np.zeros(0)
    return a.with_values(val)


def symmetrize(x: CscMatrix) -> CscMatrix:
    """
    (X + Xᵀ)/2，保持 X 的稀疏模式

    Raises:
        NotSymmetric: X 的稀疏模式不对称
    """
    t = sp.csc_array(x.to_scipy().T)
    t.sort_indices()
    if not (np.array_equal(t.indptr, x.col_ptr) and np.array_equal(t.indices, x.row_ind)):
        raise NotSymmetric("对称化需要对称的稀疏模式")
    return x.with_values(0.5 * (x.val + t.data), symmetric=True)
