# -*- coding: UTF-8 -*-
"""Pytest configuration

提供测试 fixtures:
- tridiagonal: 三对角 SPD 矩阵 (4, -1)
- random_spd: 随机稀疏 SPD 矩阵
- dense_spd: 稠密 SPD 数组
- laplacian_2d: 二维五点 Laplace 矩阵
- config_dir: 临时配置目录
- write_mtx: 把矩阵写到临时目录的辅助函数
"""

import os
import sys

# 添加项目根目录到 Python 路径
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)


import numpy as np
import pytest
import scipy.sparse as sp

from src.config import reset_config_manager
from src.sparse_core import CscMatrix, GeneratorSpec, generate_sparse_spd, save_matrix


def make_tridiagonal(n: int, diag: float = 4.0, off: float = -1.0) -> CscMatrix:
    m = sp.diags_array([np.full(n - 1, off), np.full(n, diag), np.full(n - 1, off)], offsets=[-1, 0, 1])
    return CscMatrix.from_scipy(m, symmetric=True)


def make_laplacian_2d(k: int) -> CscMatrix:
    t = sp.diags_array([-np.ones(k - 1), 2 * np.ones(k), -np.ones(k - 1)], offsets=[-1, 0, 1])
    return CscMatrix.from_scipy(sp.kronsum(t, t), symmetric=True)


def make_dense_spd(m: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((m, m))
    return b @ b.T + m * np.eye(m)


@pytest.fixture
def tridiagonal():
    """返回 12 阶三对角 SPD 矩阵"""
    return make_tridiagonal(12)


@pytest.fixture
def random_spd():
    """返回 n=60, d=0.15, κ=2 的随机 SPD 矩阵"""
    return generate_sparse_spd(GeneratorSpec(n=60, d=0.15, kappa=2.0, seed=1))


@pytest.fixture
def dense_spd():
    """返回 6 阶稠密 SPD 数组"""
    return make_dense_spd(6)


@pytest.fixture
def laplacian_2d():
    """返回 8×8 网格上的五点 Laplace 矩阵 (n=64)"""
    return make_laplacian_2d(8)


@pytest.fixture
def config_dir(tmp_path, monkeypatch):
    """隔离的配置目录，并清除会影响配置的环境变量"""
    for var in ("SM_CONFIG_DIR", "SM_SUITESPARSE_URL", "SM_CACHE_DIR", "SM_WORKERS"):
        monkeypatch.delenv(var, raising=False)
    reset_config_manager()
    path = tmp_path / "config"
    yield path
    reset_config_manager()


@pytest.fixture
def write_mtx(tmp_path):
    """返回把矩阵写成 Matrix Market 文件的函数"""

    def _write(matrix: CscMatrix, name: str = "a.mtx"):
        return save_matrix(matrix, tmp_path / name)

    return _write
