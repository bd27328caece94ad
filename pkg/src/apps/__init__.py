"""
应用层：预条件共轭梯度与能带结构能量
"""

from .cg import (
    CgReport,
    cg_solve,
    cg_solve_preconditioned,
    cg_solve_split_preconditioned,
)
from .energy import EnergyReport, band_energy, band_energy_sm
from .ilu import Ilu0Factors, ilu0
from .preconditioning import PreconditionerKind, make_sm_preconditioner, solve_with_preconditioner

__all__ = [
    "CgReport",
    "EnergyReport",
    "Ilu0Factors",
    "PreconditionerKind",
    "band_energy",
    "band_energy_sm",
    "cg_solve",
    "cg_solve_preconditioned",
    "cg_solve_split_preconditioned",
    "ilu0",
    "make_sm_preconditioner",
    "solve_with_preconditioner",
]
