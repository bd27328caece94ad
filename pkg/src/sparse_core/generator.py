"""
随机稀疏对称正定矩阵生成

参数只约束 (n, d, κ)：先生成随机对称稀疏模式和随机数值得到 B，
再通过平移 + 缩放把 B 的谱映射到 [1, κ]：

    A = I + (κ - 1) / (λmax(B) - λmin(B)) · (B - λmin(B)·I)

平移不改变非对角元的模式，因此密度由模式决定、条件数由谱映射决定。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from src.errors import InfeasibleSpec

from .matrix import CscMatrix

logger = logging.getLogger(__name__)

# κ = 1 只能由对角矩阵达到；下限保证非对角元非零
KAPPA_FLOOR = 1.01
# 非均衡矩阵的列块填充倍数（均值为 1）
UNBALANCED_MULTIPLIERS = (0.1, 0.15, 0.3, 0.5, 0.8, 1.3, 2.0, 2.85)
DENSE_EIG_LIMIT = 256


class MatrixKind(str, Enum):
    """列填充分布类型"""

    BALANCED = "balanced"
    UNBALANCED = "unbalanced"
    BANDED = "banded"


@dataclass(frozen=True)
class GeneratorSpec:
    """生成参数"""

    n: int
    d: float
    kappa: float
    kind: MatrixKind = MatrixKind.BALANCED
    seed: int = 0

    def validate(self) -> None:
        """
        Raises:
            InfeasibleSpec: 参数不可行
        """
        if self.n < 1:
            raise InfeasibleSpec(f"n 必须为正整数，得到 {self.n}")
        if not (0.0 < self.d <= 1.0):
            raise InfeasibleSpec(f"密度 d 必须在 (0, 1]，得到 {self.d}")
        if self.d * self.n < 1.0:
            raise InfeasibleSpec(
                f"d·n = {self.d * self.n:.3g} < 1，连对角元都放不下",
                details={"n": self.n, "d": self.d},
            )
        if not (self.kappa >= 1.0 and math.isfinite(self.kappa)):
            raise InfeasibleSpec(f"κ 必须 ≥ 1，得到 {self.kappa}")


def _decode_upper(keys: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    return keys // n, keys % n


def _sample_pairs(
    rng: np.random.Generator,
    row_range: tuple[int, int],
    col_range: tuple[int, int],
    k: int,
    n: int,
    upper_only: bool,
) -> np.ndarray:
    """
    在给定行列范围内不放回地抽取 k 个位置，返回 i·n + j 编码（i < j 时仅上三角）

    k 超过总体一半时直接枚举总体再抽样，否则拒绝采样。
    """
    r0, r1 = row_range
    c0, c1 = col_range
    if upper_only:
        size = (r1 - r0) * (r1 - r0 - 1) // 2
    else:
        size = (r1 - r0) * (c1 - c0)
    k = min(k, size)
    if k <= 0:
        return np.empty(0, dtype=np.int64)

    if 2 * k > size:
        if upper_only:
            iu, ju = np.triu_indices(r1 - r0, 1)
            population = (iu + r0) * n + (ju + r0)
        else:
            ii, jj = np.meshgrid(np.arange(r0, r1), np.arange(c0, c1), indexing="ij")
            population = (ii * n + jj).ravel()
        return np.sort(rng.choice(population.astype(np.int64), size=k, replace=False))

    keys = np.empty(0, dtype=np.int64)
    while keys.shape[0] < k:
        m = int(1.25 * (k - keys.shape[0])) + 16
        i = rng.integers(r0, r1, size=m)
        j = rng.integers(c0, c1, size=m)
        if upper_only:
            i, j = np.minimum(i, j), np.maximum(i, j)
            keep = i < j
            i, j = i[keep], j[keep]
        keys = np.unique(np.concatenate([keys, i * n + j]))
    if keys.shape[0] > k:
        keys = np.sort(rng.choice(keys, size=k, replace=False))
    return keys


def _balanced_pattern(rng: np.random.Generator, n: int, pairs: int) -> np.ndarray:
    """
    均衡模式：叠加随机置换 i ↔ π(i)，每个置换给每列约 2 个非零元，
    因此各列非零元个数几乎相同。密度较高时退化为均匀抽样。
    """
    total = n * (n - 1) // 2
    if pairs <= 0:
        return np.empty(0, dtype=np.int64)
    if 2 * pairs > total:
        return _sample_pairs(rng, (0, n), (0, n), pairs, n, upper_only=True)

    keys = np.empty(0, dtype=np.int64)
    while True:
        perm = rng.permutation(n)
        i = np.arange(n)
        lo, hi = np.minimum(i, perm), np.maximum(i, perm)
        fresh = np.setdiff1d(np.unique(lo[lo < hi] * n + hi[lo < hi]), keys)
        need = pairs - keys.shape[0]
        if fresh.shape[0] >= need:
            fresh = rng.choice(fresh, size=need, replace=False)
            return np.sort(np.concatenate([keys, fresh]))
        keys = np.union1d(keys, fresh)


def _unbalanced_pattern(rng: np.random.Generator, n: int, pairs: int) -> np.ndarray:
    """非均衡模式：列分块，不同块的填充率相差数倍"""
    nblocks = min(len(UNBALANCED_MULTIPLIERS), n)
    bounds = np.linspace(0, n, nblocks + 1).astype(np.int64)
    mult = rng.permutation(np.array(UNBALANCED_MULTIPLIERS[:nblocks]))
    mult = mult / mult.mean()
    q = pairs / max(n * (n - 1) / 2, 1)

    chunks = []
    for a in range(nblocks):
        for b in range(a, nblocks):
            qa = min(1.0, q * (mult[a] + mult[b]) / 2)
            ra = (int(bounds[a]), int(bounds[a + 1]))
            rb = (int(bounds[b]), int(bounds[b + 1]))
            if a == b:
                size = (ra[1] - ra[0]) * (ra[1] - ra[0] - 1) // 2
                chunks.append(_sample_pairs(rng, ra, ra, round(qa * size), n, upper_only=True))
            else:
                size = (ra[1] - ra[0]) * (rb[1] - rb[0])
                chunks.append(_sample_pairs(rng, ra, rb, round(qa * size), n, upper_only=False))
    return np.sort(np.concatenate(chunks)) if chunks else np.empty(0, dtype=np.int64)


def _banded_pattern(n: int, d: float) -> np.ndarray:
    """带状模式：半带宽 w 使 n + 2·(w·n - w(w+1)/2) ≈ d·n²"""
    target_off = d * n * n - n
    w = 0
    while w < n - 1 and 2 * ((w + 1) * n - (w + 1) * (w + 2) // 2) <= target_off:
        w += 1
    if w == 0:
        return np.empty(0, dtype=np.int64)
    keys = [np.arange(n - k, dtype=np.int64) * (n + 1) + k for k in range(1, w + 1)]
    return np.sort(np.concatenate(keys))


def _extreme_eigenvalues(b: sp.csc_array, rng: np.random.Generator) -> tuple[float, float]:
    """对称矩阵的最小/最大特征值（小矩阵稠密求解，大矩阵 Lanczos）"""
    n = b.shape[0]
    if n <= DENSE_EIG_LIMIT:
        w = np.linalg.eigvalsh(b.toarray())
        return float(w[0]), float(w[-1])
    v0 = rng.standard_normal(n)
    ncv = min(n - 1, 64)
    try:
        lmax = spla.eigsh(b, k=1, which="LA", v0=v0, ncv=ncv, tol=1e-8, return_eigenvectors=False)
        lmin = spla.eigsh(b, k=1, which="SA", v0=v0, ncv=ncv, tol=1e-8, return_eigenvectors=False)
    except spla.ArpackNoConvergence as e:
        logger.warning("Lanczos 未收敛，使用 Gershgorin 界", extra={"n": n, "error": str(e)})
        radius = np.asarray(abs(b).sum(axis=0)).ravel() - np.abs(b.diagonal())
        diag = b.diagonal()
        return float((diag - radius).min()), float((diag + radius).max())
    return float(lmin[0]), float(lmax[0])


def generate_sparse_spd(spec: GeneratorSpec) -> CscMatrix:
    """
    生成随机稀疏对称正定矩阵

    Args:
        spec: 生成参数

    Returns:
        CscMatrix: 谱落在 [1, κ] 的 SPD 矩阵，相同 seed 结果逐位相同

    Raises:
        InfeasibleSpec: 参数不可行
    """
    spec.validate()
    n = spec.n
    rng = np.random.default_rng(spec.seed)
    kind = MatrixKind(spec.kind)

    target_nnz = int(round(spec.d * n * n))
    pairs = max(target_nnz - n, 0) // 2
    if kind == MatrixKind.BALANCED:
        keys = _balanced_pattern(rng, n, pairs)
    elif kind == MatrixKind.UNBALANCED:
        keys = _unbalanced_pattern(rng, n, pairs)
    else:
        keys = _banded_pattern(n, spec.d)

    iu, ju = _decode_upper(keys.astype(np.int64), n)
    off = rng.uniform(-1.0, 1.0, size=iu.shape[0])
    off[off == 0.0] = 0.5
    diag = rng.uniform(-1.0, 1.0, size=n)
    idx = np.arange(n)
    b = sp.csc_array(
        (np.concatenate([off, off, diag]), (np.concatenate([iu, ju, idx]), np.concatenate([ju, iu, idx]))),
        shape=(n, n),
    )

    kappa = max(spec.kappa, KAPPA_FLOOR)
    lmin, lmax = _extreme_eigenvalues(b, rng)
    spread = lmax - lmin
    if spread <= 0.0:
        a = sp.eye_array(n, format="csc")
    else:
        scale = (kappa - 1.0) / spread
        a = sp.csc_array(sp.eye_array(n, format="csc") + scale * (b - lmin * sp.eye_array(n, format="csc")))
    a = sp.csc_array(a)
    a.sum_duplicates()
    a.eliminate_zeros()

    matrix = CscMatrix.from_scipy(a, symmetric=True)
    logger.debug(
        "生成随机 SPD 矩阵",
        extra={
            "n": n,
            "nnz": matrix.nnz,
            "density": round(matrix.density, 6),
            "kappa": kappa,
            "kind": kind.value,
            "seed": spec.seed,
        },
    )
    return matrix
