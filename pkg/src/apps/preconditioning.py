"""
预条件子构造与分派
"""

from __future__ import annotations

import logging
from enum import Enum

import numpy as np
import numpy.typing as npt

from src.kernels import EigSolver
from src.scheduler import SchedulerConfig
from src.sparse_core.matrix import CscMatrix
from src.submatrix import MethodConfig, submatrix_inverse_proot

from .cg import (
    DEFAULT_TOL,
    CgReport,
    cg_solve,
    cg_solve_preconditioned,
    cg_solve_split_preconditioned,
)
from .ilu import ilu0

logger = logging.getLogger(__name__)


class PreconditionerKind(str, Enum):
    NONE = "none"
    SM = "sm"
    ILU0 = "ilu0"


def make_sm_preconditioner(
    a: CscMatrix,
    sched: SchedulerConfig | None = None,
    eig_solver: EigSolver = EigSolver.LAPACK,
) -> CscMatrix:
    """K ≈ A^{-1/2}：子矩阵方法 p = 2，模式与 A 相同"""
    x, _ = submatrix_inverse_proot(a, MethodConfig(p=2, eig_solver=eig_solver), sched)
    return x


def solve_with_preconditioner(
    a: CscMatrix,
    b: npt.ArrayLike | None = None,
    kind: PreconditionerKind = PreconditionerKind.NONE,
    sched: SchedulerConfig | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> CgReport:
    """
    按预条件类型求解 Ax = b

    Args:
        b: 右端项，默认全一向量
        kind: none / sm（分裂预条件）/ ilu0（左预条件 PCG）

    Raises:
        ZeroPivot: ILU(0) 失败
        CgBreakdown: CG 破裂
    """
    rhs = np.ones(a.n) if b is None else b
    kind = PreconditionerKind(kind)
    if kind == PreconditionerKind.SM:
        k = make_sm_preconditioner(a, sched)
        report = cg_solve_split_preconditioned(a, rhs, k, tol=tol, max_iter=max_iter)
    elif kind == PreconditionerKind.ILU0:
        factors = ilu0(a)
        report = cg_solve_preconditioned(a, rhs, factors.apply, tol=tol, max_iter=max_iter)
    else:
        report = cg_solve(a, rhs, tol=tol, max_iter=max_iter)
    logger.info(
        "预条件 CG 求解完成",
        extra={
            "n": a.n,
            "preconditioner": kind.value,
            "iterations": report.iterations,
            "converged": report.converged,
        },
    )
    return report
