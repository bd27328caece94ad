"""
线程池执行子矩阵任务

工作线程数恰好为 workers；static/shuffled 预先分配列，dynamic 从共享队列取工作包。
结果按列号写入各自的槽位，因此输出与策略和线程数无关。
"""

from __future__ import annotations

import logging
import queue
import threading
import time
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from src.sparse_core.matrix import CscMatrix, FloatArray

from .plans import SchedulerConfig, Strategy, plan, plan_dynamic_chunks

if TYPE_CHECKING:
    from src.submatrix.tasks import MethodConfig

logger = logging.getLogger(__name__)


@dataclass
class TimingReport:
    """
    计时结果（秒）

    per_worker_busy 只统计 solve 时间；per_phase 中 build/solve 为各线程累加，
    assemble 为组装阶段墙钟时间。
    """

    per_worker_busy: list[float] = field(default_factory=list)
    per_worker_tasks: list[int] = field(default_factory=list)
    wall_time: float = 0.0
    per_phase: dict[str, float] = field(
        default_factory=lambda: {"build": 0.0, "solve": 0.0, "assemble": 0.0}
    )
    max_submatrix_dim: int = 0

    def busy_cv(self) -> float:
        """各线程忙碌时间的变异系数（只统计分到任务的线程）"""
        busy = np.array(
            [b for b, t in zip(self.per_worker_busy, self.per_worker_tasks, strict=True) if t > 0]
        )
        if busy.size < 2 or busy.mean() == 0.0:
            return 0.0
        return float(busy.std() / busy.mean())


class _Batches:
    """一个工作线程的任务来源"""

    def __init__(self, source: queue.Queue | list, stop: threading.Event):
        self._source = source
        self._stop = stop

    def __iter__(self) -> Iterator[np.ndarray]:
        if isinstance(self._source, list):
            for batch in self._source:
                if self._stop.is_set():
                    return
                yield batch
            return
        while not self._stop.is_set():
            try:
                yield self._source.get_nowait()
            except queue.Empty:
                return


def run_parallel(
    a: CscMatrix, cfg: MethodConfig, sched: SchedulerConfig
) -> tuple[list[FloatArray], TimingReport]:
    """
    在线程池中执行全部 n 个子矩阵任务

    Args:
        a: 对称 CSC 矩阵
        cfg: 方法参数
        sched: 调度参数

    Returns:
        (columns, TimingReport): columns[j] 是结果第 j 列的值（与 A 第 j 列的行对应）

    Raises:
        SubmatrixError: 第一个失败任务的异常（其余线程在当前任务结束后停止）
    """
    # 延迟导入，src.submatrix 的流水线依赖本模块
    from src.submatrix.tasks import (
        SubmatrixTask,
        build_index_set,
        extract_submatrix,
        solve_submatrix,
    )

    n, w = a.n, sched.workers
    columns: list[FloatArray | None] = [None] * n
    busy = [0.0] * w
    build = [0.0] * w
    tasks = [0] * w
    stop = threading.Event()
    errors: list[BaseException] = []
    err_lock = threading.Lock()

    if sched.strategy == Strategy.DYNAMIC:
        shared: queue.Queue = queue.Queue()
        for chunk in plan_dynamic_chunks(n, sched.chunk):
            shared.put(chunk)
        sources: list[queue.Queue | list] = [shared] * w
    else:
        assignment = plan(n, sched)
        sources = [[assignment[k]] for k in range(w)]

    def worker(k: int) -> None:
        try:
            for batch in _Batches(sources[k], stop):
                for j in batch.tolist():
                    if stop.is_set():
                        return
                    t0 = time.perf_counter()
                    r = build_index_set(a, j)
                    dense = extract_submatrix(a, r)
                    t1 = time.perf_counter()
                    columns[j] = solve_submatrix(SubmatrixTask(r, dense), cfg)
                    t2 = time.perf_counter()
                    build[k] += t1 - t0
                    busy[k] += t2 - t1
                    tasks[k] += 1
        except BaseException as e:
            with err_lock:
                errors.append(e)
            stop.set()

    logger.debug(
        "开始并行计算",
        extra={"n": n, "workers": w, "strategy": sched.describe()},
    )
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=w, thread_name_prefix="submatrix") as pool:
        futures = [pool.submit(worker, k) for k in range(w)]
        for f in futures:
            f.result()
    wall = time.perf_counter() - start

    if errors:
        raise errors[0]

    sizes = a.column_counts()
    report = TimingReport(
        per_worker_busy=busy,
        per_worker_tasks=tasks,
        wall_time=wall,
        per_phase={"build": sum(build), "solve": sum(busy), "assemble": 0.0},
        max_submatrix_dim=int(sizes.max()) if n else 0,
    )
    logger.debug(
        "并行计算完成",
        extra={"wall_time": wall, "busy_cv": report.busy_cv(), "tasks": tasks},
    )
    return [c if c is not None else np.zeros(0) for c in columns], report
