"""
并行调度：列分配策略与线程池执行
"""

from .plans import (
    Assignment,
    SchedulerConfig,
    Strategy,
    plan,
    plan_dynamic_chunks,
    plan_shuffled,
    plan_static,
    shuffled_columns,
)
from .pool import TimingReport, run_parallel

__all__ = [
    "Assignment",
    "SchedulerConfig",
    "Strategy",
    "TimingReport",
    "plan",
    "plan_dynamic_chunks",
    "plan_shuffled",
    "plan_static",
    "run_parallel",
    "shuffled_columns",
]
