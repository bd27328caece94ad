"""
子命令共用的参数与输出工具
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from src.config import AppConfig
from src.kernels import EigSolver
from src.scheduler import SchedulerConfig
from src.sparse_core import CscMatrix
from src.submatrix import MethodConfig, RunResult
from src.utils import LogBuffer, RunReport, summarize_times, write_reports
from src.utils.report import dump_reports


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"需要整数，得到 {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"需要正整数，得到 {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"需要实数，得到 {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"需要正数，得到 {value}")
    return value


def int_list(text: str) -> list[int]:
    """逗号分隔的正整数列表"""
    return [positive_int(t) for t in text.split(",") if t.strip()]


def float_list(text: str) -> list[float]:
    return [positive_float(t) for t in text.split(",") if t.strip()]


def add_scheduler_args(parser: argparse.ArgumentParser) -> None:
    """--workers/--strategy/--chunk/--seed，未给出时取配置文件的值"""
    group = parser.add_argument_group("调度")
    group.add_argument("--workers", type=positive_int, default=None, help="并发线程数")
    group.add_argument(
        "--strategy", choices=["static", "shuffled", "dynamic"], default=None, help="列分配策略"
    )
    group.add_argument("--chunk", type=positive_int, default=None, help="dynamic 工作包大小")
    group.add_argument("--shuffle-seed", type=int, default=None, help="shuffled 置换种子")


def scheduler_from_args(args: argparse.Namespace, config: AppConfig) -> SchedulerConfig:
    return SchedulerConfig(
        workers=args.workers if args.workers is not None else config.workers,
        strategy=args.strategy or config.strategy,
        seed=args.shuffle_seed if args.shuffle_seed is not None else config.shuffle_seed,
        chunk=args.chunk if args.chunk is not None else config.chunk,
    )


def eig_solver_from_args(args: argparse.Namespace, config: AppConfig) -> EigSolver:
    return EigSolver(getattr(args, "eig_solver", None) or config.eig_solver)


def make_report(
    command: str,
    matrix_id: str,
    a: CscMatrix,
    cfg: MethodConfig,
    sched: SchedulerConfig,
    results: Sequence[RunResult],
    **extra: Any,
) -> RunReport:
    """由一次或多次运行结果生成报告（多次时给出 min/median/max，阶段时间取中位运行）"""
    samples = [r.timing.wall_time * 1e3 for r in results]
    times = summarize_times(samples)
    if len(results) == 1:
        times = {"wall_time_ms": times["wall_time_ms"]}
    order = sorted(range(len(results)), key=lambda i: samples[i])
    mid = results[order[len(order) // 2]]
    return RunReport(
        command=command,
        matrix_id=matrix_id,
        n=a.n,
        density=a.density,
        p=cfg.p,
        kernel=cfg.kernel.value if cfg.kernel else None,
        eig_solver=cfg.eig_solver.value,
        strategy=sched.describe(),
        workers=sched.workers,
        repeats=len(results),
        phase_times={k: v * 1e3 for k, v in mid.timing.per_phase.items()},
        max_submatrix_dim=mid.timing.max_submatrix_dim,
        arrowhead_columns=mid.arrowhead_columns,
        **times,
        **extra,
    )


def warning_lines(buffer: LogBuffer | None) -> list[str]:
    if buffer is None:
        return []
    return [f"warning: {e.message}" for e in buffer.get_logs(limit=1000)]


def emit_reports(
    reports: Sequence[RunReport],
    path: str | Path | None,
    config: AppConfig,
    buffer: LogBuffer | None = None,
    extra_comments: Sequence[str] = (),
) -> None:
    """写报告文件；没有给出路径时输出到 stdout"""
    comments = [*extra_comments, *warning_lines(buffer)]
    if path:
        write_reports(reports, path, config.report_precision, comments)
    else:
        sys.stdout.write(dump_reports(reports, config.report_precision, comments))


def matrix_id_for(path: str | Path) -> str:
    return Path(path).stem
