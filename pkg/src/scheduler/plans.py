"""
列到工作线程的分配策略
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from src.errors import InvalidConfig
from src.sparse_core.matrix import IntArray


class Strategy(str, Enum):
    """分配策略"""

    STATIC = "static"
    SHUFFLED = "shuffled"
    DYNAMIC = "dynamic"


@dataclass(frozen=True)
class SchedulerConfig:
    """
    调度配置

    Attributes:
        workers: 并发线程数
        strategy: static（连续分块）/ shuffled（伪随机置换后轮流分配）/ dynamic（共享队列）
        seed: shuffled 的置换种子
        chunk: dynamic 每次从队列取出的列数
    """

    workers: int = 1
    strategy: Strategy = Strategy.STATIC
    seed: int = 0
    chunk: int = 1

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "strategy", Strategy(self.strategy))
        except ValueError:
            raise InvalidConfig(f"未知调度策略: {self.strategy!r}") from None
        if self.workers < 1:
            raise InvalidConfig(f"workers 必须 ≥ 1，得到 {self.workers}")
        if self.chunk < 1:
            raise InvalidConfig(f"chunk 必须 ≥ 1，得到 {self.chunk}")

    def describe(self) -> str:
        if self.strategy == Strategy.SHUFFLED:
            return f"shuffled(seed={self.seed})"
        if self.strategy == Strategy.DYNAMIC:
            return f"dynamic(chunk={self.chunk})"
        return "static"


@dataclass(frozen=True)
class Assignment:
    """每个工作线程负责的列（有序）"""

    workers: list[IntArray] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.workers)

    def __getitem__(self, k: int) -> IntArray:
        return self.workers[k]

    def sizes(self) -> list[int]:
        return [int(w.shape[0]) for w in self.workers]

    def is_partition(self, n: int) -> bool:
        """是否恰好覆盖 {0..n-1} 且互不重叠"""
        if not self.workers:
            return n == 0
        allcols = np.concatenate(self.workers)
        return allcols.shape[0] == n and np.array_equal(np.sort(allcols), np.arange(n))


def _check(n: int, w: int) -> None:
    if n < 0:
        raise InvalidConfig(f"n 不能为负，得到 {n}")
    if w < 1:
        raise InvalidConfig(f"workers 必须 ≥ 1，得到 {w}")


def plan_static(n: int, w: int) -> Assignment:
    """
    连续分块：前 n % w 个线程各多分一列

    Examples:
        n=10, w=3 → [0..3], [4..6], [7..9]
    """
    _check(n, w)
    base, extra = divmod(n, w)
    sizes = [base + 1 if k < extra else base for k in range(w)]
    bounds = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    return Assignment([np.arange(bounds[k], bounds[k + 1], dtype=np.int64) for k in range(w)])


def shuffled_columns(k: int, n: int, w: int, seed: int) -> IntArray:
    """线程 k 在 shuffled 策略下的列，只依赖 (k, n, w, seed)"""
    perm = np.random.default_rng(seed).permutation(n).astype(np.int64)
    return perm[k::w]


def plan_shuffled(n: int, w: int, seed: int = 0) -> Assignment:
    """伪随机但确定的置换，按轮转方式发给各线程"""
    _check(n, w)
    return Assignment([shuffled_columns(k, n, w, seed) for k in range(w)])


def plan_dynamic_chunks(n: int, chunk: int = 1) -> list[IntArray]:
    """dynamic 策略的工作包：按列号顺序每 chunk 列一个"""
    if chunk < 1:
        raise InvalidConfig(f"chunk 必须 ≥ 1，得到 {chunk}")
    _check(n, 1)
    return [np.arange(s, min(s + chunk, n), dtype=np.int64) for s in range(0, n, chunk)]


def plan(n: int, sched: SchedulerConfig) -> Assignment:
    """static / shuffled 的预分配"""
    if sched.strategy == Strategy.SHUFFLED:
        return plan_shuffled(n, sched.workers, sched.seed)
    return plan_static(n, sched.workers)
