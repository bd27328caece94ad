"""
子矩阵稠密计算核：LU 求逆、Jacobi 特征分解、逆 p 次根、Newton 精化
"""

from .eig import EigenDecomposition, EigSolver, eig_decompose, lapack_eig, sym_eig
from .lu import LuFactors, lu_factor, lu_invert
from .proot import (
    check_power,
    dense_residual_norm,
    inverse_proot_dense,
    inverse_proot_eig,
    refine_inverse_proot,
)

__all__ = [
    "LuFactors",
    "lu_factor",
    "lu_invert",
    "EigSolver",
    "EigenDecomposition",
    "sym_eig",
    "lapack_eig",
    "eig_decompose",
    "check_power",
    "inverse_proot_dense",
    "inverse_proot_eig",
    "dense_residual_norm",
    "refine_inverse_proot",
]
