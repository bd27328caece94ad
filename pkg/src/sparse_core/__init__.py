"""
稀疏矩阵基础模块

- CscMatrix / DenseMatrix 类型与三元组构造
- Matrix Market 读写
- 随机稀疏 SPD 矩阵生成
- 谱范数与条件数估计
"""

from .generator import GeneratorSpec, MatrixKind, generate_sparse_spd
from .matrix import (
    CscMatrix,
    DenseMatrix,
    FloatArray,
    IntArray,
    as_dense,
    csc_from_arrays,
    csc_from_triplets,
)
from .mmio import load_matrix, read_matrix_market, save_matrix, write_matrix_market
from .norms import NormEstimate, estimate_condition, estimate_spectral_norm, spectral_norm

__all__ = [
    # 类型
    "CscMatrix",
    "DenseMatrix",
    "FloatArray",
    "IntArray",
    "as_dense",
    "csc_from_arrays",
    "csc_from_triplets",
    # 读写
    "read_matrix_market",
    "write_matrix_market",
    "load_matrix",
    "save_matrix",
    # 生成
    "GeneratorSpec",
    "MatrixKind",
    "generate_sparse_spd",
    # 范数
    "NormEstimate",
    "spectral_norm",
    "estimate_spectral_norm",
    "estimate_condition",
]
