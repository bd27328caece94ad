"""
零填充不完全 LU 分解 ILU(0)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from src.errors import ZeroPivot
from src.sparse_core.matrix import CscMatrix, FloatArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ilu0Factors:
    """L 为单位下三角，U 为上三角，两者模式都取自 A"""

    lower: CscMatrix
    upper: CscMatrix

    @cached_property
    def _lower_csr(self) -> sp.csr_array:
        csr = sp.csr_array(self.lower.to_scipy())
        # spsolve_triangular 要求 int32 索引
        csr.indices = csr.indices.astype(np.int32)
        csr.indptr = csr.indptr.astype(np.int32)
        return csr

    @cached_property
    def _upper_csr(self) -> sp.csr_array:
        csr = sp.csr_array(self.upper.to_scipy())
        # spsolve_triangular 要求 int32 索引
        csr.indices = csr.indices.astype(np.int32)
        csr.indptr = csr.indptr.astype(np.int32)
        return csr

    def apply(self, r: FloatArray) -> FloatArray:
        """z = U⁻¹ L⁻¹ r（两次三角求解）"""
        y = spla.spsolve_triangular(self._lower_csr, r, lower=True, unit_diagonal=True)
        return spla.spsolve_triangular(self._upper_csr, y, lower=False)

    def product(self) -> sp.csc_array:
        return sp.csc_array(self.lower.to_scipy() @ self.upper.to_scipy())


def ilu0(a: CscMatrix) -> Ilu0Factors:
    """
    IKJ 形式的 ILU(0)，只在 A 的稀疏模式上更新

    Raises:
        ZeroPivot: 主对角元为零或缺失
    """
    n = a.n
    csr = sp.csr_array(a.to_scipy())
    csr.sort_indices()
    indptr, indices = csr.indptr, csr.indices
    data = csr.data.astype(np.float64).copy()

    diag_pos = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        lo, hi = indptr[i], indptr[i + 1]
        k = lo + int(np.searchsorted(indices[lo:hi], i))
        if k < hi and indices[k] == i:
            diag_pos[i] = k
    missing = np.flatnonzero(diag_pos < 0)
    if missing.size:
        raise ZeroPivot(int(missing[0]))

    for i in range(1, n):
        lo, hi = indptr[i], indptr[i + 1]
        cols = indices[lo:hi]
        for off in range(int(diag_pos[i]) - lo):
            k = int(cols[off])
            pivot = data[diag_pos[k]]
            if pivot == 0.0:
                raise ZeroPivot(k)
            lik = data[lo + off] / pivot
            data[lo + off] = lik
            # 行 k 的上三角部分与行 i 中 j > k 的列求交集
            k_lo, k_hi = int(diag_pos[k]) + 1, indptr[k + 1]
            k_cols = indices[k_lo:k_hi]
            if k_cols.size == 0:
                continue
            rest = cols[off + 1 :]
            pos = np.searchsorted(rest, k_cols)
            np.minimum(pos, max(rest.size - 1, 0), out=pos)
            hit = rest[pos] == k_cols if rest.size else np.zeros(k_cols.size, dtype=bool)
            data[lo + off + 1 + pos[hit]] -= lik * data[k_lo:k_hi][hit]

    zero = np.flatnonzero(data[diag_pos] == 0.0)
    if zero.size:
        raise ZeroPivot(int(zero[0]))

    lu = sp.csr_array((data, indices, indptr), shape=(n, n))
    lower = sp.tril(lu, k=-1, format="csc") + sp.eye_array(n, format="csc")
    upper = sp.triu(lu, k=0, format="csc")
    logger.debug("ILU(0) 分解完成", extra={"n": n, "nnz": int(lu.nnz)})
    return Ilu0Factors(
        CscMatrix.from_scipy(lower),
        CscMatrix.from_scipy(upper),
    )
