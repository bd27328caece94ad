"""
子矩阵方法完整流程

    检查对角元 → 并行构造并求解各列子矩阵 → 组装 → （可选）对称化
"""

from __future__ import annotations

import logging
import time
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.sparse.linalg as spla

from src.errors import DiagonalZero, NotSymmetric, SizeMismatch
from src.kernels import check_power
from src.scheduler.plans import SchedulerConfig
from src.scheduler.pool import TimingReport, run_parallel
from src.sparse_core.matrix import CscMatrix
from src.sparse_core.norms import spectral_norm

from .assemble import assemble_result, symmetrize
from .tasks import MethodConfig, apply_kernel, missing_diagonal_columns, submatrix_sizes

logger = logging.getLogger(__name__)

# 子矩阵维度超过 n 的这个比例时视为类箭头矩阵
ARROWHEAD_RATIO = 0.5


@dataclass
class RunResult:
    """
    一次运行的结果，可直接解包为 (X, timing)
    """

    x: CscMatrix
    timing: TimingReport
    arrowhead_columns: int = 0
    sizes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def __iter__(self) -> Iterator[Any]:
        yield self.x
        yield self.timing


def _check_input(a: CscMatrix) -> None:
    if not a.symmetric:
        raise NotSymmetric("子矩阵方法需要对称矩阵")
    missing = missing_diagonal_columns(a)
    if missing:
        raise DiagonalZero(missing)


def submatrix_inverse_proot(
    a: CscMatrix,
    cfg: MethodConfig | None = None,
    sched: SchedulerConfig | None = None,
) -> RunResult:
    """
    用子矩阵方法近似计算 A 的逆 p 次根

    Args:
        a: 对称、主对角元非零的 CSC 矩阵
        cfg: 方法参数，默认 p = 1
        sched: 调度参数，默认单线程 static

    Returns:
        RunResult: 结果矩阵（稀疏模式与 A 相同）与计时

    Raises:
        NotSymmetric: A 不对称
        DiagonalZero: 列出所有主对角元缺失的列
        SubmatrixError: 第一个失败的子矩阵任务（附带列号）
    """
    cfg = cfg or MethodConfig()
    sched = sched or SchedulerConfig()
    _check_input(a)

    sizes = submatrix_sizes(a)
    logger.info(
        "子矩阵方法开始",
        extra={
            "n": a.n,
            "nnz": a.nnz,
            "p": cfg.p,
            "kernel": cfg.kernel.value if cfg.kernel else None,
            "workers": sched.workers,
            "strategy": sched.describe(),
        },
    )
    start = time.perf_counter()
    columns, timing = run_parallel(a, cfg, sched)

    t0 = time.perf_counter()
    x = assemble_result(a, columns)
    if cfg.symmetrize:
        x = symmetrize(x)
    timing.per_phase["assemble"] = time.perf_counter() - t0
    timing.wall_time = time.perf_counter() - start

    arrowhead = int(np.count_nonzero(sizes > ARROWHEAD_RATIO * a.n)) if a.n > 1 else 0
    if arrowhead:
        logger.warning(
            "存在维度超过 n/2 的子矩阵，子矩阵方法无法带来加速",
            extra={"arrowhead_columns": arrowhead, "max_submatrix_dim": timing.max_submatrix_dim},
        )
    logger.info(
        "子矩阵方法完成",
        extra={"n": a.n, "wall_time_ms": timing.wall_time * 1e3, "max_dim": timing.max_submatrix_dim},
    )
    return RunResult(x, timing, arrowhead, sizes)


def reference_inverse_proot(a: CscMatrix, cfg: MethodConfig | None = None) -> CscMatrix:
    """
    朴素参考实现：把 A 稠密化后逐列扫描非零行、取子矩阵、求解并拷回一列

    只用于小矩阵的结果核对。
    """
    cfg = cfg or MethodConfig()
    _check_input(a)
    dense = a.to_dense()
    n = a.n
    out = np.zeros((n, n))
    for j in range(n):
        rows = [i for i in range(n) if dense[i, j] != 0.0]
        # 显式存储的零在稀疏模式中仍然计入
        stored, _ = a.column(j)
        rows = sorted(set(rows) | set(stored.tolist()))
        sub = np.empty((len(rows), len(rows)))
        for k, rk in enumerate(rows):
            for m, rm in enumerate(rows):
                sub[k, m] = dense[rk, rm]
        xs = apply_kernel(sub, cfg)
        pos = rows.index(j)
        for k, rk in enumerate(rows):
            out[rk, j] = xs[k, pos]
    cols = np.repeat(np.arange(n), a.column_counts())
    x = a.with_values(out[a.row_ind, cols])
    return symmetrize(x) if cfg.symmetrize else x


def residual_operator(a: CscMatrix, x: CscMatrix, p: int) -> spla.LinearOperator:
    """XᵖA − I 的无矩阵线性算子"""
    p = check_power(p)
    if a.n != x.n:
        raise SizeMismatch(f"A 为 {a.n} 阶，X 为 {x.n} 阶")
    sa, sx = a.to_scipy(), x.to_scipy()
    sat, sxt = sa.T, sx.T

    def matvec(v: np.ndarray) -> np.ndarray:
        v = np.ravel(v)
        y = sa @ v
        for _ in range(p):
            y = sx @ y
        return y - v

    def rmatvec(u: np.ndarray) -> np.ndarray:
        u = np.ravel(u)
        y = u
        for _ in range(p):
            y = sxt @ y
        return sat @ y - u

    return spla.LinearOperator((a.n, a.n), matvec=matvec, rmatvec=rmatvec, dtype=np.float64)


def residual_norm(a: CscMatrix, x: CscMatrix, p: int, tol: float = 1e-10, max_iter: int = 1000) -> float:
    """‖XᵖA − I‖₂，只用矩阵-向量乘"""
    return spectral_norm(residual_operator(a, x, p), tol=tol, max_iter=max_iter)
