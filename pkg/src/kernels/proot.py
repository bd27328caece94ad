"""
稠密逆 p 次根与 Newton 迭代精化
"""

from __future__ import annotations

import logging
import math

import numpy as np

from src.errors import Diverged, InvalidConfig, NoConvergence, NotPositiveDefinite, SingularMatrix
from src.sparse_core.matrix import DenseMatrix, as_dense

from .eig import EigSolver, eig_decompose
from .lu import lu_factor, lu_invert

logger = logging.getLogger(__name__)

# λmin ≤ PD_RTOL · λmax 视为非正定
PD_RTOL = 1e-12
# 残差连续增大的步数上限
DIVERGENCE_STREAK = 2


def check_power(p: int) -> int:
    """校验 p 为正整数"""
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)) or p < 1:
        raise InvalidConfig(f"p 必须为正整数，得到 {p!r}")
    return int(p)


def inverse_proot_dense(
    d: DenseMatrix, p: int, eig_solver: EigSolver = EigSolver.JACOBI
) -> DenseMatrix:
    """
    稠密 SPD 矩阵的逆 p 次根 D^{-1/p}

    p = 1 走 LU 求逆；p ≥ 2 走特征分解 V·diag(λ^{-1/p})·Vᵀ，结果对称。

    Args:
        d: 对称正定方阵
        p: 正整数
        eig_solver: p ≥ 2 时使用的特征分解实现

    Raises:
        NotPositiveDefinite: 特征值非正，或 p = 1 时 LU 奇异
    """
    p = check_power(p)
    a = as_dense(d)
    if p == 1:
        try:
            return lu_invert(lu_factor(a))
        except SingularMatrix as e:
            raise NotPositiveDefinite(f"子矩阵奇异: {e.message}", details=e.details) from e

    return inverse_proot_eig(a, p, eig_solver)


def inverse_proot_eig(
    d: DenseMatrix, p: int, eig_solver: EigSolver = EigSolver.JACOBI
) -> DenseMatrix:
    """特征分解路线的逆 p 次根（对 p = 1 也适用），结果对称"""
    p = check_power(p)
    dec = eig_decompose(as_dense(d), eig_solver)
    if dec.m == 0:
        return np.zeros((0, 0))
    lmin, lmax = float(dec.eigenvalues[0]), float(dec.eigenvalues[-1])
    if lmax <= 0.0 or lmin <= PD_RTOL * lmax:
        raise NotPositiveDefinite(
            f"最小特征值 {lmin:.3e} 不满足正定（λmax = {lmax:.3e}）",
            details={"lambda_min": lmin, "lambda_max": lmax},
        )
    v = dec.eigenvectors
    x = (v * dec.eigenvalues ** (-1.0 / p)) @ v.T
    return 0.5 * (x + x.T)


def dense_residual_norm(a: DenseMatrix, x: DenseMatrix, p: int) -> float:
    """‖XᵖA − I‖₂（稠密）"""
    m = a.shape[0]
    r = np.linalg.matrix_power(x, p) @ a - np.eye(m)
    return float(np.linalg.norm(r, 2)) if m else 0.0


def refine_inverse_proot(
    a: DenseMatrix,
    x0: DenseMatrix,
    p: int,
    tol: float = 1e-12,
    max_iter: int = 20,
) -> tuple[DenseMatrix, int]:
    """
    Newton 迭代精化逆 p 次根

        X_{k+1} = (1/p)·X_k·((p+1)I − A·X_kᵖ)

    Args:
        a: SPD 矩阵
        x0: 初值，需满足 ‖X0ᵖA − I‖₂ < 1
        p: 正整数
        tol: 残差阈值
        max_iter: 最大迭代次数

    Returns:
        (X, iterations): 残差低于 tol 的迭代结果及迭代次数；初值已满足时为 (X0, 0)

    Raises:
        Diverged: 残差连续两步增大
        NoConvergence: 达到 max_iter，estimate 为残差最小的迭代结果
    """
    p = check_power(p)
    a = as_dense(a)
    x = as_dense(x0).copy()
    m = a.shape[0]
    eye = np.eye(m)

    res = dense_residual_norm(a, x, p)
    if res < tol:
        return x, 0

    best, best_res = x, res
    prev, streak = res, 0
    for it in range(1, max_iter + 1):
        x = (x @ ((p + 1) * eye - a @ np.linalg.matrix_power(x, p))) / p
        res = dense_residual_norm(a, x, p)
        if not math.isfinite(res):
            raise Diverged("Newton 迭代产生非有限值", details={"iteration": it})
        if res > prev:
            streak += 1
            if streak >= DIVERGENCE_STREAK:
                raise Diverged(
                    f"残差连续 {streak} 步增大",
                    details={"iteration": it, "residual": res, "best_residual": best_res},
                )
        else:
            streak = 0
        if res < best_res:
            best, best_res = x, res
        prev = res
        logger.debug("Newton 迭代", extra={"iteration": it, "residual": res})
        if res < tol:
            return x, it

    raise NoConvergence(
        f"Newton 迭代 {max_iter} 步后残差 {best_res:.3e} 仍高于 {tol:.1e}",
        iterations=max_iter,
        estimate=best,
        details={"residual": best_res},
    )
