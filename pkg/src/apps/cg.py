"""
共轭梯度法

三种入口共用同一个迭代核心：
- cg_solve: 无预条件
- cg_solve_preconditioned: 左预条件 PCG（用于 ILU(0)）
- cg_solve_split_preconditioned: 分裂预条件 KᵀAKy = Kᵀb，x = Ky（用于子矩阵方法的 K ≈ A^{-1/2}）
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.errors import CgBreakdown, InvalidConfig, NotSymmetric, SizeMismatch, SubmatrixError
from src.sparse_core.matrix import CscMatrix, FloatArray

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-6

Operator = Callable[[FloatArray], FloatArray]


@dataclass
class CgReport:
    """
    CG 求解结果

    Attributes:
        iterations: 迭代次数（未收敛时为 max_iter）
        converged: 是否收敛
        final_residual: 返回解的 ‖b − Ax‖₂
        relative_residual: 收敛判据使用的相对残差（分裂预条件时为变换后系统的残差）
        x: 解向量
    """

    iterations: int
    converged: bool
    final_residual: float
    relative_residual: float
    x: FloatArray


def _check_system(a: CscMatrix, b: npt.ArrayLike) -> FloatArray:
    if not a.symmetric:
        raise NotSymmetric("CG 需要对称矩阵")
    rhs = np.asarray(b, dtype=np.float64).ravel()
    if rhs.shape[0] != a.n:
        raise SizeMismatch(f"右端项长度 {rhs.shape[0]} 与矩阵阶数 {a.n} 不符")
    if not np.all(np.isfinite(rhs)):
        raise SubmatrixError("右端项包含 NaN 或 Inf")
    return rhs


def _limits(n: int, tol: float, max_iter: int | None) -> int:
    if tol <= 0:
        raise InvalidConfig(f"tol 必须为正，得到 {tol}")
    limit = 2 * n if max_iter is None else max_iter
    if limit < 0:
        raise InvalidConfig(f"max_iter 不能为负，得到 {max_iter}")
    return limit


def _cg_core(
    apply_a: Operator,
    b: FloatArray,
    tol: float,
    max_iter: int,
    apply_m: Operator | None = None,
) -> tuple[FloatArray, int, bool, float]:
    """返回 (x, iterations, converged, relative_residual)"""
    x = np.zeros_like(b)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return x, 0, True, 0.0

    r = b.copy()
    z = apply_m(r) if apply_m else r
    p = z.copy()
    rz = float(r @ z)
    rel = 1.0
    for it in range(1, max_iter + 1):
        ap = apply_a(p)
        pap = float(p @ ap)
        if not pap > 0.0:
            raise CgBreakdown(
                f"第 {it} 步 pᵀAp = {pap:.3e} ≤ 0，矩阵非正定",
                details={"iteration": it, "pAp": pap},
            )
        alpha = rz / pap
        x += alpha * p
        r -= alpha * ap
        rel = float(np.linalg.norm(r)) / bnorm
        if rel < tol:
            return x, it, True, rel
        z = apply_m(r) if apply_m else r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
        if not math.isfinite(rz):
            raise CgBreakdown("CG 迭代产生非有限值", details={"iteration": it})
    return x, max_iter, False, rel


def _report(a: CscMatrix, b: FloatArray, x: FloatArray, it: int, ok: bool, rel: float) -> CgReport:
    final = float(np.linalg.norm(b - a.matvec(x)))
    if not ok:
        logger.warning(
            "CG 未在迭代上限内收敛",
            extra={"n": a.n, "iterations": it, "relative_residual": rel},
        )
    return CgReport(it, ok, final, rel, x)


def cg_solve(
    a: CscMatrix,
    b: npt.ArrayLike,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> CgReport:
    """
    标准 CG，收敛判据 ‖b − Ax‖₂/‖b‖₂ < tol

    Args:
        a: 对称矩阵
        b: 右端项
        tol: 相对残差阈值，默认 1e-6
        max_iter: 迭代上限，默认 2n

    Raises:
        CgBreakdown: pᵀAp ≤ 0
    """
    rhs = _check_system(a, b)
    limit = _limits(a.n, tol, max_iter)
    x, it, ok, rel = _cg_core(a.matvec, rhs, tol, limit)
    return _report(a, rhs, x, it, ok, rel)


def cg_solve_preconditioned(
    a: CscMatrix,
    b: npt.ArrayLike,
    apply_m: Operator,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> CgReport:
    """左预条件 CG，apply_m(r) ≈ A⁻¹r；收敛判据仍是原系统的相对残差"""
    rhs = _check_system(a, b)
    limit = _limits(a.n, tol, max_iter)
    x, it, ok, rel = _cg_core(a.matvec, rhs, tol, limit, apply_m=apply_m)
    return _report(a, rhs, x, it, ok, rel)


def cg_solve_split_preconditioned(
    a: CscMatrix,
    b: npt.ArrayLike,
    k: CscMatrix,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> CgReport:
    """
    分裂预条件 CG：对算子 v ↦ Kᵀ(A(Kv)) 与右端 Kᵀb 做 CG，返回 x = Ky

    K 按原样使用（可以不对称），KᵀAK 不显式构造。
    """
    rhs = _check_system(a, b)
    if k.n != a.n:
        raise SizeMismatch(f"K 为 {k.n} 阶，A 为 {a.n} 阶")
    limit = _limits(a.n, tol, max_iter)
    sa, sk = a.to_scipy(), k.to_scipy()
    skt = sk.T

    def apply_kak(v: FloatArray) -> FloatArray:
        return skt @ (sa @ (sk @ v))

    y, it, ok, rel = _cg_core(apply_kak, skt @ rhs, tol, limit)
    return _report(a, rhs, sk @ y, it, ok, rel)
