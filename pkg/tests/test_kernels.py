"""
稠密计算核测试：LU、Jacobi 特征分解、逆 p 次根、Newton 精化
"""

import numpy as np
import pytest
import scipy.linalg as sla

from src.errors import (
    Diverged,
    InvalidConfig,
    NoConvergence,
    NotPositiveDefinite,
    NotSymmetric,
    SingularMatrix,
)
from src.kernels import (
    EigSolver,
    check_power,
    dense_residual_norm,
    eig_decompose,
    inverse_proot_dense,
    inverse_proot_eig,
    lapack_eig,
    lu_factor,
    lu_invert,
    refine_inverse_proot,
    sym_eig,
)
from conftest import make_dense_spd

TWO_BY_TWO = np.array([[2.0, 1.0], [1.0, 2.0]])


def _random_symmetric(m: int, seed: int) -> np.ndarray:
    b = np.random.default_rng(seed).standard_normal((m, m))
    return 0.5 * (b + b.T)


class TestLu:
    """LU 分解与求逆测试"""

    def test_hand_factorization(self):
        """测试 2×2 手算分解"""
        f = lu_factor(TWO_BY_TWO)
        np.testing.assert_allclose(f.lower, [[1.0, 0.0], [0.5, 1.0]], rtol=1e-15)
        np.testing.assert_allclose(f.upper, [[2.0, 1.0], [0.0, 1.5]], rtol=1e-15)
        assert f.perm.tolist() == [0, 1]

    def test_hand_inverse(self):
        """测试 2×2 手算逆"""
        inv = lu_invert(lu_factor(TWO_BY_TWO))
        np.testing.assert_allclose(inv, [[2 / 3, -1 / 3], [-1 / 3, 2 / 3]], rtol=1e-14)

    def test_diagonal_inverse(self):
        np.testing.assert_allclose(lu_invert(lu_factor(np.diag([2.0, 4.0]))), np.diag([0.5, 0.25]))

    def test_factor_reconstructs(self, dense_spd):
        """测试 A[perm] = L·U"""
        f = lu_factor(dense_spd)
        np.testing.assert_allclose(dense_spd[f.perm], f.lower @ f.upper, atol=1e-12)

    def test_invert(self, dense_spd):
        """测试求逆结果"""
        inv = lu_invert(lu_factor(dense_spd))
        np.testing.assert_allclose(inv @ dense_spd, np.eye(6), atol=1e-12)

    def test_nonsymmetric_ok(self):
        """测试需要行交换的非对称矩阵"""
        a = np.array([[0.0, 2.0], [1.0, 1.0]])
        np.testing.assert_allclose(lu_invert(lu_factor(a)), np.linalg.inv(a))

    def test_singular(self):
        """测试奇异矩阵"""
        with pytest.raises(SingularMatrix):
            lu_factor(np.array([[1.0, 2.0], [2.0, 4.0]]))
        with pytest.raises(SingularMatrix):
            lu_factor(np.array([[0.0, 1.0], [0.0, 2.0]]))

    def test_zero_matrix(self):
        with pytest.raises(SingularMatrix):
            lu_factor(np.zeros((3, 3)))

    def test_empty(self):
        """测试 0×0 矩阵"""
        assert lu_invert(lu_factor(np.zeros((0, 0)))).shape == (0, 0)


class TestEig:
    """特征分解测试"""

    def test_hand_decomposition(self):
        """测试 [[2,1],[1,2]] 的特征值 1、3 及特征向量（至多差符号）"""
        dec = sym_eig(TWO_BY_TWO)
        np.testing.assert_allclose(dec.eigenvalues, [1.0, 3.0], rtol=1e-14)
        s = 1.0 / np.sqrt(2.0)
        np.testing.assert_allclose(np.abs(dec.eigenvectors), [[s, s], [s, s]], rtol=1e-14)
        assert dec.eigenvectors[0, 0] * dec.eigenvectors[1, 0] < 0
        assert dec.eigenvectors[0, 1] * dec.eigenvectors[1, 1] > 0

    @pytest.mark.parametrize("m", [2, 7, 12])
    def test_jacobi_matches_lapack(self, m):
        """测试 Jacobi 与 LAPACK 结果一致"""
        a = _random_symmetric(m, seed=m)
        dec = sym_eig(a)
        np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(a), atol=1e-12)
        np.testing.assert_allclose(dec.eigenvectors.T @ dec.eigenvectors, np.eye(m), atol=1e-12)
        np.testing.assert_allclose(dec.reconstruct(), a, atol=1e-12)

    def test_eigenvalues_sorted(self):
        """测试特征值升序"""
        dec = sym_eig(np.diag([5.0, 1.0, 3.0]))
        assert dec.eigenvalues.tolist() == [1.0, 3.0, 5.0]

    def test_one_by_one(self):
        dec = sym_eig(np.array([[5.0]]))
        assert dec.eigenvalues.tolist() == [5.0]
        assert dec.eigenvectors.tolist() == [[1.0]]

    def test_not_symmetric(self):
        """测试非对称输入"""
        with pytest.raises(NotSymmetric):
            sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))
        with pytest.raises(NotSymmetric):
            lapack_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_dispatch(self, dense_spd):
        """测试按名称选择实现"""
        jac = eig_decompose(dense_spd, EigSolver.JACOBI)
        lap = eig_decompose(dense_spd, "lapack")
        np.testing.assert_allclose(jac.eigenvalues, lap.eigenvalues, rtol=1e-12)


class TestInverseProot:
    """逆 p 次根测试"""

    def test_diagonal(self):
        """测试 diag(4, 9) 的逆平方根"""
        np.testing.assert_allclose(inverse_proot_dense(np.diag([4.0, 9.0]), 2), np.diag([0.5, 1 / 3]), rtol=1e-14)

    def test_hand_inverse_sqrt(self):
        """测试 [[2,1],[1,2]] 的逆平方根"""
        r = 1.0 / np.sqrt(3.0)
        expected = 0.5 * np.array([[1 + r, r - 1], [r - 1, 1 + r]])
        np.testing.assert_allclose(inverse_proot_dense(TWO_BY_TWO, 2), expected, rtol=1e-13)
        np.testing.assert_allclose(expected, [[0.78868, -0.21132], [-0.21132, 0.78868]], atol=1e-5)

    @pytest.mark.parametrize("p", [1, 2, 5])
    def test_identity(self, p):
        np.testing.assert_allclose(inverse_proot_dense(np.eye(4), p), np.eye(4), atol=1e-15)

    def test_p1_is_inverse(self, dense_spd):
        """测试 p = 1 即矩阵逆"""
        np.testing.assert_allclose(
            inverse_proot_dense(dense_spd, 1), np.linalg.inv(dense_spd), rtol=1e-10, atol=1e-14
        )

    @pytest.mark.parametrize("p", [2, 3, 4])
    @pytest.mark.parametrize("solver", list(EigSolver))
    def test_residual(self, dense_spd, p, solver):
        """测试结果对称且残差接近机器精度"""
        x = inverse_proot_dense(dense_spd, p, solver)
        np.testing.assert_allclose(x, x.T)
        assert dense_residual_norm(dense_spd, x, p) < 1e-12

    def test_matches_scipy_fractional_power(self, dense_spd):
        """测试与 scipy 分数幂一致"""
        expected = sla.fractional_matrix_power(dense_spd, -0.5).real
        np.testing.assert_allclose(inverse_proot_eig(dense_spd, 2), expected, rtol=1e-10, atol=1e-13)

    def test_indefinite(self):
        """测试不定矩阵"""
        with pytest.raises(NotPositiveDefinite):
            inverse_proot_dense(np.diag([1.0, -1.0]), 2)

    def test_singular_p1(self):
        with pytest.raises(NotPositiveDefinite):
            inverse_proot_dense(np.ones((2, 2)), 1)

    @pytest.mark.parametrize("p", [0, -1, 1.5, True])
    def test_invalid_power(self, p):
        """测试非法幂次"""
        with pytest.raises(InvalidConfig):
            check_power(p)


class TestRefine:
    """Newton 精化测试"""

    def test_scalar_sequence(self):
        """测试 A = 4, X0 = 0.2 的迭代序列 0.24 → 0.2496 → 0.25"""
        a = np.array([[4.0]])
        x = np.array([[0.2]])
        seen = []
        for _ in range(2):
            with pytest.raises(NoConvergence) as exc:
                refine_inverse_proot(a, x, 1, tol=1e-14, max_iter=1)
            x = exc.value.estimate
            seen.append(float(x[0, 0]))
        assert seen == pytest.approx([0.24, 0.2496], rel=1e-14)

        x, it = refine_inverse_proot(a, x, 1, tol=1e-14)
        assert it >= 1
        assert x[0, 0] == pytest.approx(0.25, rel=1e-14)

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_identity_needs_no_iterations(self, p):
        x, it = refine_inverse_proot(np.eye(3), np.eye(3), p)
        assert it == 0
        np.testing.assert_array_equal(x, np.eye(3))

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_converges_from_scaled_root(self, p):
        """测试从缩放后的精确根出发收敛"""
        a = make_dense_spd(8, seed=3)
        x0 = 0.9 * inverse_proot_eig(a, p, EigSolver.LAPACK)
        x, it = refine_inverse_proot(a, x0, p)
        assert it > 0
        assert dense_residual_norm(a, x, p) < 1e-12

    def test_already_accurate(self, dense_spd):
        """测试初值已满足阈值时不迭代"""
        x0 = inverse_proot_eig(dense_spd, 2, EigSolver.LAPACK)
        x, it = refine_inverse_proot(dense_spd, x0, 2, tol=1e-8)
        assert it == 0
        np.testing.assert_array_equal(x, x0)

    def test_diverges(self, dense_spd):
        """测试初值过大时报告发散"""
        x0 = 3.0 * inverse_proot_eig(dense_spd, 2, EigSolver.LAPACK)
        with pytest.raises(Diverged):
            refine_inverse_proot(dense_spd, x0, 2)

    def test_no_convergence_returns_best(self, dense_spd):
        """测试达到上限时返回最佳估计"""
        x0 = 0.5 * np.linalg.inv(dense_spd)
        with pytest.raises(NoConvergence) as exc:
            refine_inverse_proot(dense_spd, x0, 1, max_iter=1)
        assert exc.value.iterations == 1
        assert dense_residual_norm(dense_spd, exc.value.estimate, 1) == pytest.approx(0.25, rel=1e-8)
