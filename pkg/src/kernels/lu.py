"""
LU 分解与求逆（LAPACK dgetrf / dgetri）
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from src.errors import SingularMatrix
from src.sparse_core.matrix import DenseMatrix, IntArray, as_dense

# 主元相对阈值：|U_kk| ≤ SINGULAR_RTOL · max|D| 视为奇异
SINGULAR_RTOL = 1e-14


@dataclass(frozen=True)
class LuFactors:
    """
    部分选主元 LU 分解 P·A = L·U

    lu 中严格下三角部分是单位下三角 L，上三角部分是 U；
    perm 满足 A[perm] = L @ U；piv 是 LAPACK 的 0 起行交换序列，供 dgetri 使用。
    """

    m: int
    lu: DenseMatrix
    perm: IntArray
    piv: np.ndarray

    @property
    def lower(self) -> DenseMatrix:
        return np.tril(self.lu, -1) + np.eye(self.m)

    @property
    def upper(self) -> DenseMatrix:
        return np.triu(self.lu)


def _perm_from_piv(piv: np.ndarray) -> IntArray:
    perm = np.arange(piv.shape[0], dtype=np.int64)
    for i, k in enumerate(piv.tolist()):
        if k != i:
            perm[i], perm[k] = perm[k], perm[i]
    return perm


def lu_factor(d: DenseMatrix) -> LuFactors:
    """
    LU 分解

    Args:
        d: 稠密方阵

    Returns:
        LuFactors: 分解结果

    Raises:
        SingularMatrix: 存在 |U_kk| ≤ 1e-14·max|D| 的主元
    """
    a = as_dense(d)
    m = a.shape[0]
    if m == 0:
        return LuFactors(0, np.zeros((0, 0)), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int32))

    lu, piv, info = lapack.dgetrf(np.asfortranarray(a))
    if info < 0:
        raise SingularMatrix(f"dgetrf 参数错误 info={info}")

    scale = float(np.max(np.abs(a)))
    pivots = np.abs(np.diag(lu))
    k = int(np.argmin(pivots))
    if scale == 0.0 or info > 0 or pivots[k] <= SINGULAR_RTOL * scale:
        raise SingularMatrix(
            f"第 {k} 个主元 {pivots[k]:.3e} 过小",
            details={"pivot_index": k, "pivot": float(pivots[k]), "scale": scale},
        )
    return LuFactors(m, lu, _perm_from_piv(piv), piv)


def lu_invert(f: LuFactors) -> DenseMatrix:
    """
    由 LU 分解求逆

    Raises:
        SingularMatrix: dgetri 报告奇异或结果含非有限值
    """
    if f.m == 0:
        return np.zeros((0, 0))
    inv, info = lapack.dgetri(f.lu, f.piv)
    if info != 0:
        raise SingularMatrix(f"dgetri 失败 info={info}", details={"info": int(info)})
    if not np.all(np.isfinite(inv)):
        raise SingularMatrix("求逆结果包含非有限值")
    return np.ascontiguousarray(inv)
