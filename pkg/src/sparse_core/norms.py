"""
范数与条件数估计

spectral_norm 对 MᵀM 做幂迭代，只需要矩阵-向量乘，
因此既可用于稠密/稀疏矩阵，也可用于无矩阵的线性算子（例如残差 XᵖA - I）。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from src.errors import BreakdownOnIndefinite, InvalidConfig, NoConvergence, NotSymmetric

from .matrix import CscMatrix

logger = logging.getLogger(__name__)

START_VECTOR_SEED = 20180813


@dataclass(frozen=True)
class NormEstimate:
    """幂迭代估计结果"""

    value: float
    iterations: int
    converged: bool


def _as_operator(m: Any) -> spla.LinearOperator:
    if isinstance(m, CscMatrix):
        return spla.aslinearoperator(m.to_scipy())
    if isinstance(m, np.ndarray) or sp.issparse(m):
        return spla.aslinearoperator(m)
    if hasattr(m, "matvec") and hasattr(m, "rmatvec") and hasattr(m, "shape"):
        if isinstance(m, spla.LinearOperator):
            return m
        return spla.LinearOperator(m.shape, matvec=m.matvec, rmatvec=m.rmatvec, dtype=np.float64)
    return spla.aslinearoperator(np.asarray(m, dtype=np.float64))


def _start_vector(n: int) -> np.ndarray:
    v = np.random.default_rng(START_VECTOR_SEED).standard_normal(n)
    return v / np.linalg.norm(v)


def estimate_spectral_norm(m: Any, tol: float = 1e-10, max_iter: int = 1000) -> NormEstimate:
    """
    幂迭代估计 ‖M‖₂ = sqrt(λmax(MᵀM))

    Args:
        m: 稠密数组、scipy 稀疏矩阵、CscMatrix 或带 matvec/rmatvec 的算子
        tol: 相邻两次估计的相对变化阈值
        max_iter: 最大迭代次数

    Returns:
        NormEstimate: 估计值、迭代次数、是否收敛
    """
    if tol <= 0:
        raise InvalidConfig(f"tol 必须为正，得到 {tol}")
    op = _as_operator(m)
    ncols = op.shape[1]
    if ncols == 0:
        return NormEstimate(0.0, 0, True)

    v = _start_vector(ncols)
    w = op.matvec(v)
    if not np.any(w):
        # 随机起点落在零空间的概率为零，零结果视为零矩阵；全一向量兜底
        v = np.ones(ncols) / math.sqrt(ncols)
        w = op.matvec(v)
        if not np.any(w):
            return NormEstimate(0.0, 1, True)

    sigma = float(np.linalg.norm(w))
    for it in range(1, max_iter + 1):
        z = op.rmatvec(w)
        znorm = float(np.linalg.norm(z))
        if znorm == 0.0:
            return NormEstimate(sigma, it, True)
        v = z / znorm
        w = op.matvec(v)
        new_sigma = float(np.linalg.norm(w))
        if abs(new_sigma - sigma) <= tol * max(new_sigma, np.finfo(float).tiny):
            return NormEstimate(new_sigma, it, True)
        sigma = new_sigma

    logger.warning(
        "谱范数幂迭代未收敛",
        extra={"max_iter": max_iter, "estimate": sigma, "tol": tol},
    )
    return NormEstimate(sigma, max_iter, False)


def spectral_norm(m: Any, tol: float = 1e-10, max_iter: int = 1000, strict: bool = False) -> float:
    """
    ‖M‖₂ 的幂迭代估计

    Args:
        strict: 为 True 时未收敛抛出 NoConvergence（附带最佳估计），
            否则返回最佳估计并记录警告

    Raises:
        NoConvergence: strict 模式下达到 max_iter 仍未收敛
    """
    est = estimate_spectral_norm(m, tol=tol, max_iter=max_iter)
    if strict and not est.converged:
        raise NoConvergence(
            f"谱范数 {max_iter} 次迭代未收敛",
            iterations=est.iterations,
            estimate=est.value,
        )
    return est.value


def _inverse_iteration_lambda_min(
    a: sp.csc_array, tol: float, max_iter: int
) -> float:
    """CG 求解的逆迭代估计最小特征值"""
    n = a.shape[0]
    x = _start_vector(n)
    lam = math.inf
    for it in range(1, max_iter + 1):
        y, info = spla.cg(a, x, rtol=1e-10, maxiter=max(2 * n, 50))
        if info < 0:
            raise BreakdownOnIndefinite("逆迭代中 CG 失败", details={"iteration": it})
        if info > 0:
            logger.debug("逆迭代内层 CG 未完全收敛", extra={"iteration": it, "cg_iter": info})
        ynorm = float(np.linalg.norm(y))
        if ynorm == 0.0 or not math.isfinite(ynorm):
            raise BreakdownOnIndefinite("逆迭代得到零向量或非有限值")
        y /= ynorm
        new_lam = float(y @ (a @ y))
        if new_lam <= 0.0:
            raise BreakdownOnIndefinite(
                f"Rayleigh 商 {new_lam:.3e} ≤ 0，矩阵非正定",
                details={"rayleigh": new_lam},
            )
        if abs(new_lam - lam) <= tol * new_lam:
            return new_lam
        lam, x = new_lam, y
    logger.warning("逆迭代未达到容差，返回当前估计", extra={"max_iter": max_iter, "lambda_min": lam})
    return lam


def estimate_condition(a: CscMatrix, tol: float = 1e-6, max_iter: int = 200) -> float:
    """
    估计对称正定矩阵的条件数 κ ≈ λmax / λmin

    λmax 用幂迭代，λmin 用 CG 求解的逆迭代；精度目标为 2 倍以内。

    Raises:
        NotSymmetric: 矩阵不对称
        BreakdownOnIndefinite: 逆迭代失败（矩阵非正定）
    """
    if not a.symmetric:
        raise NotSymmetric("条件数估计需要对称矩阵")
    if a.n == 0:
        return 1.0
    lmax = spectral_norm(a, tol=tol, max_iter=max(max_iter, 1000))
    if lmax == 0.0:
        raise BreakdownOnIndefinite("零矩阵没有有限条件数")
    lmin = _inverse_iteration_lambda_min(a.to_scipy(), tol=tol, max_iter=max_iter)
    kappa = lmax / lmin
    logger.debug(
        "条件数估计完成",
        extra={"n": a.n, "lambda_max": lmax, "lambda_min": lmin, "kappa": kappa},
    )
    return max(kappa, 1.0)
