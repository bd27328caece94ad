"""
子矩阵方法

对每一列 j：取该列非零行 R，构造稠密子矩阵 A[R, R]，计算其逆 p 次根，
把对应 j 的那一列拷回结果。结果与 A 的稀疏模式完全相同。
"""

from .tasks import (
    IndexSet,
    Kernel,
    MethodConfig,
    RefineConfig,
    SubmatrixTask,
    apply_kernel,
    build_index_set,
    extract_submatrix,
    make_task,
    missing_diagonal_columns,
    solve_submatrix,
    submatrix_sizes,
)
from .assemble import assemble_result, symmetrize  # noqa: I001
from .pipeline import (
    ARROWHEAD_RATIO,
    RunResult,
    reference_inverse_proot,
    residual_norm,
    residual_operator,
    submatrix_inverse_proot,
)

__all__ = [
    "ARROWHEAD_RATIO",
    "IndexSet",
    "Kernel",
    "MethodConfig",
    "RefineConfig",
    "RunResult",
    "SubmatrixTask",
    "apply_kernel",
    "assemble_result",
    "build_index_set",
    "extract_submatrix",
    "make_task",
    "missing_diagonal_columns",
    "reference_inverse_proot",
    "residual_norm",
    "residual_operator",
    "solve_submatrix",
    "submatrix_inverse_proot",
    "submatrix_sizes",
    "symmetrize",
]
