"""
配置数据模型
"""

from dataclasses import dataclass, fields

from src.kernels.eig import EigSolver
from src.scheduler.plans import Strategy

DEFAULT_SUITESPARSE_URL = "https://sparse.tamu.edu"


@dataclass
class AppConfig:
    """应用主配置"""

    workers: int = 1  # 并发线程数
    strategy: str = Strategy.STATIC.value  # 调度策略
    chunk: int = 1  # dynamic 工作包大小
    shuffle_seed: int = 0  # shuffled 置换种子
    eig_solver: str = EigSolver.LAPACK.value  # 子矩阵特征分解实现
    cg_tol: float = 1e-6  # CG 相对残差阈值
    cache_dir: str = ""  # SuiteSparse 缓存目录，空字符串表示 <配置目录>/suitesparse
    suitesparse_url: str = DEFAULT_SUITESPARSE_URL  # SuiteSparse 下载地址
    http_timeout: float = 60.0  # 下载超时（秒）
    report_precision: int = 17  # 报告中浮点数的有效数字上限

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]
