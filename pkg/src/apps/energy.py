"""
能带结构能量

    E_BS    = tr(P·H)
    E_BS^sm = tr(S·P·H_ortho)，H_ortho = H·X，X ≈ S⁻¹ 由子矩阵方法求得
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import scipy.sparse as sp

from src.errors import SizeMismatch
from src.scheduler import SchedulerConfig
from src.sparse_core.matrix import CscMatrix
from src.submatrix import MethodConfig, submatrix_inverse_proot

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergyReport:
    e_bs: float
    e_bs_sm: float
    delta_rel: float


def _as_sparse(m: Any) -> sp.csc_array:
    if isinstance(m, CscMatrix):
        return m.to_scipy()
    return sp.csc_array(m)


def band_energy(p: Any, h: Any) -> float:
    """
    tr(P·H) = Σ P[i,j]·H[j,i]，只遍历存储的元素

    Raises:
        SizeMismatch: 维度不一致
    """
    sp_p, sp_h = _as_sparse(p), _as_sparse(h)
    if sp_p.shape != sp_h.shape[::-1]:
        raise SizeMismatch(f"P 形状 {sp_p.shape} 与 H 形状 {sp_h.shape} 不匹配")
    return float(sp_p.multiply(sp_h.T).sum())


def band_energy_sm(
    s: CscMatrix,
    p: CscMatrix,
    h: CscMatrix,
    sched: SchedulerConfig | None = None,
) -> EnergyReport:
    """
    用子矩阵方法求 S⁻¹，比较正交化前后的能带结构能量

    Args:
        s: 重叠矩阵（对称，主对角元非零）
        p: 密度矩阵
        h: Hamilton 矩阵

    Returns:
        EnergyReport: 两个能量以及相对误差
    """
    if not (s.n == p.n == h.n):
        raise SizeMismatch(f"S/P/H 阶数不一致: {s.n}, {p.n}, {h.n}")
    e_bs = band_energy(p, h)
    x, _ = submatrix_inverse_proot(s, MethodConfig(p=1), sched)
    h_ortho = h.to_scipy() @ x.to_scipy()
    e_sm = band_energy(s.to_scipy(), p.to_scipy() @ h_ortho)

    if e_bs != 0.0:
        delta = abs(e_bs - e_sm) / abs(e_bs)
    else:
        delta = 0.0 if e_sm == 0.0 else math.inf
    logger.info(
        "能带结构能量计算完成",
        extra={"n": s.n, "e_bs": e_bs, "e_bs_sm": e_sm, "delta_rel": delta},
    )
    return EnergyReport(e_bs, e_sm, delta)
