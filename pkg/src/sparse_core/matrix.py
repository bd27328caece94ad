"""
稀疏/稠密矩阵类型

CscMatrix 是整个项目的输入输出表示（压缩稀疏列格式），
DenseMatrix 是子矩阵计算的基本单元（float64 numpy 数组）。
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
import numpy.typing as npt
import scipy.sparse as sp

from src.errors import (
    DuplicateEntry,
    IndexOutOfRange,
    NotSymmetric,
    SizeMismatch,
    SubmatrixError,
)

DenseMatrix = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]
FloatArray = npt.NDArray[np.float64]


def as_dense(data: Any) -> DenseMatrix:
    """
    转换为稠密方阵并校验

    Args:
        data: 可转换为二维数组的对象

    Returns:
        DenseMatrix: float64 方阵

    Raises:
        SizeMismatch: 非方阵
        SubmatrixError: 含 NaN/Inf
    """
    a = np.asarray(data, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SizeMismatch(f"需要方阵，得到形状 {a.shape}", details={"shape": a.shape})
    if not np.all(np.isfinite(a)):
        raise SubmatrixError("稠密矩阵包含 NaN 或 Inf")
    return a


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class CscMatrix:
    """
    压缩稀疏列（CSC）格式的 n×n 矩阵

    构造后不可变，可被多个线程同时读取。symmetric 为 None 时自动检测；
    为 True 时会校验结构和数值对称性。
    """

    n: int
    col_ptr: IntArray
    row_ind: IntArray
    val: FloatArray
    symmetric: bool | None = field(default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "col_ptr", _readonly(np.array(self.col_ptr, dtype=np.int64)))
        object.__setattr__(self, "row_ind", _readonly(np.array(self.row_ind, dtype=np.int64)))
        object.__setattr__(self, "val", _readonly(np.array(self.val, dtype=np.float64)))
        self.validate()
        if self.symmetric is None:
            object.__setattr__(self, "symmetric", self.is_symmetric())
        elif self.symmetric and not self.is_symmetric():
            raise NotSymmetric("symmetric 标志已设置，但矩阵不对称")

    # === 构造 ===

    @classmethod
    def identity(cls, n: int) -> CscMatrix:
        """n 阶单位矩阵"""
        idx = np.arange(n, dtype=np.int64)
        return cls(n, np.arange(n + 1, dtype=np.int64), idx, np.ones(n), symmetric=True)

    @classmethod
    def from_scipy(cls, m: Any, symmetric: bool | None = None) -> CscMatrix:
        """从 scipy 稀疏矩阵构造（保留显式存储的零）"""
        if m.shape[0] != m.shape[1]:
            raise SizeMismatch(f"需要方阵，得到形状 {m.shape}")
        csc = sp.csc_array(m, copy=True)
        csc.sum_duplicates()
        csc.sort_indices()
        return cls(csc.shape[0], csc.indptr, csc.indices, csc.data, symmetric=symmetric)

    @classmethod
    def from_dense(cls, a: Any, symmetric: bool | None = None) -> CscMatrix:
        """从稠密数组构造，只保留精确非零元"""
        dense = as_dense(a)
        return cls.from_scipy(sp.csc_array(dense), symmetric=symmetric)

    # === 校验 ===

    def validate(self) -> None:
        """
        检查 CSC 结构不变量

        Raises:
            IndexOutOfRange: 行索引越界
            SubmatrixError: col_ptr 非法、列内行索引未严格递增或含非有限值
        """
        n = self.n
        if n < 0:
            raise SubmatrixError(f"非法维度 n={n}")
        cp, ri, v = self.col_ptr, self.row_ind, self.val
        if cp.shape != (n + 1,):
            raise SubmatrixError(f"col_ptr 长度应为 {n + 1}，实际 {cp.shape[0]}")
        nnz = ri.shape[0]
        if cp[0] != 0 or cp[-1] != nnz or v.shape[0] != nnz:
            raise SubmatrixError(
                "col_ptr 首尾与 nnz 不一致",
                details={"col_ptr_0": int(cp[0]), "col_ptr_n": int(cp[-1]), "nnz": nnz},
            )
        if np.any(np.diff(cp) < 0):
            raise SubmatrixError("col_ptr 非单调不减")
        if nnz and (ri.min() < 0 or ri.max() >= n):
            raise IndexOutOfRange(
                f"行索引超出 [0, {n})",
                details={"min": int(ri.min()), "max": int(ri.max())},
            )
        if nnz > 1:
            bad = np.diff(ri) <= 0
            starts = cp[1:-1]
            starts = starts[(starts > 0) & (starts < nnz)]
            bad[starts - 1] = False
            if np.any(bad):
                k = int(np.flatnonzero(bad)[0])
                raise SubmatrixError("列内行索引未严格递增", details={"position": k})
        if not np.all(np.isfinite(v)):
            raise SubmatrixError("矩阵包含 NaN 或 Inf")

    def is_symmetric(self) -> bool:
        """结构与数值对称性检查：对每个 (i,j,v) 存在相等的 (j,i,v)"""
        s = self.to_scipy()
        t = sp.csc_array(s.T)
        t.sort_indices()
        return (
            np.array_equal(s.indptr, t.indptr)
            and np.array_equal(s.indices, t.indices)
            and np.array_equal(s.data, t.data)
        )

    # === 属性 ===

    @property
    def nnz(self) -> int:
        return int(self.row_ind.shape[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.n)

    @property
    def density(self) -> float:
        return self.nnz / float(self.n * self.n) if self.n else 0.0

    def column(self, j: int) -> tuple[IntArray, FloatArray]:
        """第 j 列的 (行索引, 数值) 切片视图"""
        lo, hi = self.col_ptr[j], self.col_ptr[j + 1]
        return self.row_ind[lo:hi], self.val[lo:hi]

    def column_counts(self) -> IntArray:
        """每列非零元个数"""
        return np.diff(self.col_ptr)

    def diagonal(self) -> FloatArray:
        return self.to_scipy().diagonal()

    def same_pattern(self, other: CscMatrix) -> bool:
        """稀疏模式完全一致（col_ptr 与 row_ind 逐元素相等）"""
        return (
            self.n == other.n
            and np.array_equal(self.col_ptr, other.col_ptr)
            and np.array_equal(self.row_ind, other.row_ind)
        )

    # === 运算 ===

    @cached_property
    def _scipy(self) -> sp.csc_array:
        return sp.csc_array((self.val, self.row_ind, self.col_ptr), shape=(self.n, self.n))

    def to_scipy(self) -> sp.csc_array:
        """返回共享底层数组的 scipy csc_array（只读使用）"""
        return self._scipy

    def to_dense(self) -> DenseMatrix:
        return self._scipy.toarray()

    def matvec(self, x: npt.ArrayLike) -> FloatArray:
        return self._scipy @ np.asarray(x, dtype=np.float64)

    def rmatvec(self, x: npt.ArrayLike) -> FloatArray:
        """转置乘向量 Mᵀx"""
        return self._scipy.T @ np.asarray(x, dtype=np.float64)

    def transpose(self) -> CscMatrix:
        return CscMatrix.from_scipy(self._scipy.T)

    def with_values(self, val: npt.ArrayLike, symmetric: bool | None = None) -> CscMatrix:
        """复用本矩阵的 col_ptr/row_ind，替换数值"""
        return CscMatrix(self.n, self.col_ptr, self.row_ind, val, symmetric=symmetric)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CscMatrix):
            return NotImplemented
        return self.same_pattern(other) and np.array_equal(self.val, other.val)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"CscMatrix(n={self.n}, nnz={self.nnz}, symmetric={self.symmetric})"


def csc_from_arrays(
    rows: npt.ArrayLike,
    cols: npt.ArrayLike,
    vals: npt.ArrayLike,
    n: int,
    symmetric: bool | None = None,
) -> CscMatrix:
    """
    由坐标数组构造规范 CSC（列内排序）

    Raises:
        IndexOutOfRange: 索引越界
        DuplicateEntry: 重复的 (row, col)
    """
    r = np.asarray(rows, dtype=np.int64).ravel()
    c = np.asarray(cols, dtype=np.int64).ravel()
    v = np.asarray(vals, dtype=np.float64).ravel()
    if not (r.shape == c.shape == v.shape):
        raise SizeMismatch("rows/cols/vals 长度不一致")
    if r.size:
        bad = (r < 0) | (r >= n) | (c < 0) | (c >= n)
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise IndexOutOfRange(
                f"元素 ({int(r[k])}, {int(c[k])}) 超出 [0, {n})",
                details={"row": int(r[k]), "col": int(c[k]), "n": n},
            )
    keys = c * max(n, 1) + r
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    dup = np.flatnonzero(np.diff(keys) == 0)
    if dup.size:
        k = order[dup[0]]
        raise DuplicateEntry(
            f"重复元素 ({int(r[k])}, {int(c[k])})",
            details={"row": int(r[k]), "col": int(c[k])},
        )
    col_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(c, minlength=n), out=col_ptr[1:])
    return CscMatrix(n, col_ptr, r[order], v[order], symmetric=symmetric)


def csc_from_triplets(entries: Iterable[tuple[int, int, float]], n: int) -> CscMatrix:
    """
    由 (row, col, value) 三元组列表构造 CSC；对称标志当且仅当元素集对称时设置

    Args:
        entries: 三元组序列
        n: 矩阵阶数

    Returns:
        CscMatrix: 规范化后的矩阵
    """
    items = list(entries)
    if not items:
        return csc_from_arrays([], [], [], n)
    rows, cols, vals = zip(*items, strict=True)
    return csc_from_arrays(rows, cols, vals, n)
