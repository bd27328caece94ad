"""
单列子矩阵任务：索引集、稠密子矩阵、计算核分派

这些函数只读共享的 CscMatrix，可在多个线程中同时调用。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.errors import (
    DiagonalZero,
    IndexOutOfRange,
    InvalidConfig,
    NoConvergence,
    NotSymmetric,
    SubmatrixError,
)
from src.kernels import (
    EigSolver,
    check_power,
    inverse_proot_dense,
    inverse_proot_eig,
    refine_inverse_proot,
)
from src.sparse_core.matrix import CscMatrix, DenseMatrix, FloatArray, IntArray

logger = logging.getLogger(__name__)


class Kernel(str, Enum):
    """子矩阵计算核"""

    LU = "lu"
    EIG = "eig"


@dataclass(frozen=True)
class RefineConfig:
    """Newton 精化参数"""

    tol: float = 1e-12
    max_iter: int = 20

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise InvalidConfig(f"refine tol 必须为正，得到 {self.tol}")
        if self.max_iter < 1:
            raise InvalidConfig(f"refine max_iter 必须 ≥ 1，得到 {self.max_iter}")


@dataclass(frozen=True)
class MethodConfig:
    """
    子矩阵方法参数

    Attributes:
        p: 逆 p 次根的 p，p = 1 即求逆
        kernel: lu（仅 p = 1）或 eig；None 时 p = 1 取 lu，否则取 eig
        eig_solver: eig 计算核使用的特征分解实现
        refine: 对每个子矩阵结果做 Newton 精化
        symmetrize: 输出 (X + Xᵀ)/2
    """

    p: int = 1
    kernel: Kernel | None = None
    eig_solver: EigSolver = EigSolver.LAPACK
    refine: RefineConfig | None = None
    symmetrize: bool = False

    def __post_init__(self) -> None:
        check_power(self.p)
        kernel = Kernel.LU if self.p == 1 else Kernel.EIG
        if self.kernel is not None:
            try:
                kernel = Kernel(self.kernel)
            except ValueError:
                raise InvalidConfig(f"未知计算核: {self.kernel!r}") from None
        if kernel == Kernel.LU and self.p != 1:
            raise InvalidConfig(f"lu 计算核只支持 p = 1，得到 p = {self.p}")
        object.__setattr__(self, "kernel", kernel)
        try:
            object.__setattr__(self, "eig_solver", EigSolver(self.eig_solver))
        except ValueError:
            raise InvalidConfig(f"未知特征分解实现: {self.eig_solver!r}") from None


@dataclass(frozen=True)
class IndexSet:
    """第 col 列的非零行 R（升序）以及 R 中 col 的位置"""

    col: int
    rows: IntArray
    pos_of_col: int

    @property
    def size(self) -> int:
        return int(self.rows.shape[0])


@dataclass(frozen=True)
class SubmatrixTask:
    index_set: IndexSet
    dense: DenseMatrix


def build_index_set(a: CscMatrix, j: int) -> IndexSet:
    """
    第 j 列的索引集，直接取 CSC 列切片

    Raises:
        NotSymmetric: 矩阵未标记为对称
        IndexOutOfRange: j 越界
        DiagonalZero: 主对角元结构性缺失
    """
    if not a.symmetric:
        raise NotSymmetric("子矩阵方法需要对称矩阵")
    if not (0 <= j < a.n):
        raise IndexOutOfRange(f"列 {j} 超出 [0, {a.n})", details={"column": j})
    rows, _ = a.column(j)
    pos = int(np.searchsorted(rows, j))
    if pos >= rows.shape[0] or rows[pos] != j:
        raise DiagonalZero([j])
    return IndexSet(j, rows, pos)


def extract_submatrix(a: CscMatrix, r: IndexSet) -> DenseMatrix:
    """
    稠密子矩阵 A[R, R]

    对 R 中每一列的行索引在有序的 R 上做二分归并，不会把 A 稠密化。
    """
    rows = r.rows
    m = rows.shape[0]
    out = np.zeros((m, m))
    if m == 0:
        return out
    starts = a.col_ptr[rows]
    lengths = a.col_ptr[rows + 1] - starts
    total = int(lengths.sum())
    offsets = np.cumsum(lengths) - lengths
    idx = np.repeat(starts - offsets, lengths) + np.arange(total, dtype=np.int64)
    target_col = np.repeat(np.arange(m, dtype=np.int64), lengths)

    src_rows = a.row_ind[idx]
    pos = np.searchsorted(rows, src_rows)
    np.minimum(pos, m - 1, out=pos)
    hit = rows[pos] == src_rows
    out[pos[hit], target_col[hit]] = a.val[idx[hit]]
    return out


def make_task(a: CscMatrix, j: int) -> SubmatrixTask:
    r = build_index_set(a, j)
    return SubmatrixTask(r, extract_submatrix(a, r))


def apply_kernel(dense: DenseMatrix, cfg: MethodConfig) -> DenseMatrix:
    """对稠密子矩阵计算逆 p 次根，按需精化"""
    if cfg.kernel == Kernel.LU:
        x = inverse_proot_dense(dense, 1)
    else:
        x = inverse_proot_eig(dense, cfg.p, cfg.eig_solver)
    if cfg.refine is not None:
        try:
            x, _ = refine_inverse_proot(dense, x, cfg.p, cfg.refine.tol, cfg.refine.max_iter)
        except NoConvergence as e:
            logger.warning(
                "子矩阵精化未达到容差，使用残差最小的迭代结果",
                extra={"m": dense.shape[0], "iterations": e.iterations},
            )
            x = e.estimate
    return x


def solve_submatrix(task: SubmatrixTask, cfg: MethodConfig) -> FloatArray:
    """
    计算子矩阵的逆 p 次根，只返回第 pos_of_col 列

    Raises:
        SubmatrixError: 计算核错误，附带列号
    """
    r = task.index_set
    try:
        x = apply_kernel(task.dense, cfg)
    except SubmatrixError as e:
        raise e.with_column(r.col) from e
    return np.ascontiguousarray(x[:, r.pos_of_col])


def submatrix_sizes(a: CscMatrix) -> IntArray:
    """每列子矩阵的维度（= 该列非零元个数）"""
    return a.column_counts()


def missing_diagonal_columns(a: CscMatrix) -> list[int]:
    """主对角元结构性缺失的所有列"""
    cols = np.repeat(np.arange(a.n, dtype=np.int64), a.column_counts())
    present = np.zeros(a.n, dtype=bool)
    present[cols[a.row_ind == cols]] = True
    return np.flatnonzero(~present).tolist()
