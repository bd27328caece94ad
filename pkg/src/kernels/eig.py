"""
对称矩阵特征分解

sym_eig 是循环 Jacobi 方法：每一步按循环赛（round-robin）顺序选出 m/2 个互不相交的
(p, q) 对，同时旋转；m-1 步构成一轮 sweep，恰好覆盖全部 m(m-1)/2 个对。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg as sla

from src.errors import NoConvergence, NotSymmetric
from src.sparse_core.matrix import DenseMatrix, FloatArray, as_dense

logger = logging.getLogger(__name__)

SYMMETRY_ATOL = 1e-12
MAX_SWEEPS = 50
DEFAULT_TOL = 1e-14


class EigSolver(str, Enum):
    """特征分解实现"""

    JACOBI = "jacobi"
    LAPACK = "lapack"


@dataclass(frozen=True)
class EigenDecomposition:
    """A = V·diag(λ)·Vᵀ，特征值升序"""

    m: int
    eigenvalues: FloatArray
    eigenvectors: DenseMatrix

    def reconstruct(self) -> DenseMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def _check_symmetric(a: DenseMatrix) -> None:
    if a.size == 0:
        return
    asym = float(np.max(np.abs(a - a.T)))
    if asym > SYMMETRY_ATOL:
        raise NotSymmetric(f"矩阵不对称，max|D-Dᵀ| = {asym:.3e}", details={"asymmetry": asym})


def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """m 为奇数时补一个轮空位；每一步的对互不相交"""
    size = m + (m % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        p = np.array(players[: size // 2], dtype=np.int64)
        q = np.array(players[size // 2 :][::-1], dtype=np.int64)
        keep = (p < m) & (q < m)
        p, q = p[keep], q[keep]
        lo, hi = np.minimum(p, q), np.maximum(p, q)
        rounds.append((lo, hi))
        players = [players[0], players[-1], *players[1:-1]]
    return rounds


def _max_off_diagonal(a: DenseMatrix) -> float:
    off = np.abs(a - np.diag(np.diag(a)))
    return float(off.max()) if off.size else 0.0


def sym_eig(d: DenseMatrix, tol: float = DEFAULT_TOL) -> EigenDecomposition:
    """
    循环 Jacobi 特征分解

    Args:
        d: 对称方阵（绝对误差 1e-12 以内）
        tol: 收敛阈值，最大非对角元 ≤ tol·‖D‖_F 时停止

    Returns:
        EigenDecomposition: 升序特征值与正交特征向量

    Raises:
        NotSymmetric: 输入不对称
        NoConvergence: 超过 50 轮 sweep
    """
    a = as_dense(d)
    _check_symmetric(a)
    m = a.shape[0]
    a = 0.5 * (a + a.T)
    v = np.eye(m)
    if m <= 1:
        return EigenDecomposition(m, np.diag(a).copy(), v)

    threshold = tol * float(np.linalg.norm(a, "fro"))
    rounds = _round_robin(m)
    sweeps = 0
    while _max_off_diagonal(a) > threshold:
        if sweeps >= MAX_SWEEPS:
            w = np.diag(a).copy()
            order = np.argsort(w, kind="stable")
            raise NoConvergence(
                f"Jacobi {MAX_SWEEPS} 轮 sweep 未收敛",
                iterations=sweeps,
                estimate=EigenDecomposition(m, w[order], v[:, order]),
                details={"off_diagonal": _max_off_diagonal(a), "threshold": threshold},
            )
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            sign = np.where(theta >= 0.0, 1.0, -1.0)
            t = sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            cols_p, cols_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cols_p * c - cols_q * s
            a[:, q] = cols_p * s + cols_q * c
            rows_p, rows_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
            a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
        sweeps += 1

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    logger.debug("Jacobi 收敛", extra={"m": m, "sweeps": sweeps})
    return EigenDecomposition(m, w[order], np.ascontiguousarray(v[:, order]))


def lapack_eig(d: DenseMatrix) -> EigenDecomposition:
    """LAPACK (syevr) 特征分解，接口与 sym_eig 相同"""
    a = as_dense(d)
    _check_symmetric(a)
    w, v = sla.eigh(0.5 * (a + a.T))
    return EigenDecomposition(a.shape[0], w, v)


def eig_decompose(d: DenseMatrix, solver: EigSolver = EigSolver.JACOBI) -> EigenDecomposition:
    """按 solver 分派"""
    if EigSolver(solver) == EigSolver.LAPACK:
        return lapack_eig(d)
    return sym_eig(d)
