"""
bench：扩展性测试

模式：
- cores：固定矩阵，遍历 --workers-list，speedup 相对 workers 最小的一项
- sizes-fixed-d：遍历 --sizes-list，密度固定
- sizes-linear-d：遍历 --sizes-list，密度 d = min(1, 0.16·1024/n)
- error-surface：遍历 (n, κ)，记录残差
"""

from __future__ import annotations

import argparse
import logging
import time
from enum import Enum

import numpy as np

from src.errors import InfeasibleSpec
from src.kernels import EigSolver
from src.scheduler import SchedulerConfig
from src.sparse_core import CscMatrix, GeneratorSpec, MatrixKind, generate_sparse_spd, load_matrix
from src.submatrix import MethodConfig, apply_kernel, residual_norm, submatrix_inverse_proot
from src.utils import RunReport, export_reports_csv

from ..common import (
    add_scheduler_args,
    eig_solver_from_args,
    emit_reports,
    float_list,
    int_list,
    make_report,
    matrix_id_for,
    positive_float,
    positive_int,
    scheduler_from_args,
)

logger = logging.getLogger(__name__)

LINEAR_D_BASE = 0.16 * 1024


class BenchMode(str, Enum):
    CORES = "cores"
    SIZES_FIXED_D = "sizes-fixed-d"
    SIZES_LINEAR_D = "sizes-linear-d"
    ERROR_SURFACE = "error-surface"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("bench", help="扩展性与误差测试")
    parser.add_argument("--mode", choices=[m.value for m in BenchMode], required=True)
    parser.add_argument("--in", dest="input", default=None, help="cores 模式可直接读取矩阵")
    parser.add_argument("--workers-list", type=int_list, default=None, help="如 1,2,4,8")
    parser.add_argument("--sizes-list", type=int_list, default=None, help="如 1024,2048,4096")
    parser.add_argument("--kappa-list", type=float_list, default=None, help="error-surface 的 κ 列表")
    parser.add_argument("--n", type=positive_int, default=8192, help="cores 模式的矩阵阶数")
    parser.add_argument(
        "--density", type=positive_float, default=None, help="密度 (默认: 0.01；error-surface 为 0.05)"
    )
    parser.add_argument("--kappa", type=float, default=2.0)
    parser.add_argument(
        "--kind", choices=[k.value for k in MatrixKind], default=MatrixKind.BALANCED.value
    )
    parser.add_argument("--seed", type=int, default=0, help="矩阵生成种子")
    parser.add_argument("--p", type=positive_int, default=1)
    parser.add_argument("--eig-solver", choices=[s.value for s in EigSolver], default=None)
    parser.add_argument("--repeats", type=positive_int, default=1)
    parser.add_argument("--baseline-dense", action="store_true", help="附加整矩阵稠密求逆耗时")
    parser.add_argument("--residual", action="store_true", help="每项附加 ‖XᵖA − I‖₂")
    parser.add_argument("--csv", default=None, help="同时导出 CSV")
    parser.add_argument("--plot", default=None, help="同时输出 log-log 图 (PNG)")
    parser.add_argument("--report", default=None, help="报告输出文件 (默认: stdout)")
    add_scheduler_args(parser)
    parser.set_defaults(handler=run, parser=parser)


def linear_density(n: int) -> float:
    return min(1.0, LINEAR_D_BASE / n)


def loglog_slope(xs: list[float], ys: list[float]) -> float:
    """log y 对 log x 的最小二乘斜率"""
    if len(xs) < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)


def _generate(args: argparse.Namespace, n: int, d: float, kappa: float) -> CscMatrix:
    spec = GeneratorSpec(n=n, d=d, kappa=kappa, kind=MatrixKind(args.kind), seed=args.seed)
    try:
        spec.validate()
    except InfeasibleSpec as e:
        args.parser.error(str(e))
    return generate_sparse_spd(spec)


def _dense_baseline_ms(a: CscMatrix, cfg: MethodConfig) -> float:
    dense = a.to_dense()
    start = time.perf_counter()
    apply_kernel(dense, cfg)
    return (time.perf_counter() - start) * 1e3


def _measure(
    args: argparse.Namespace,
    matrix_id: str,
    a: CscMatrix,
    cfg: MethodConfig,
    sched: SchedulerConfig,
    **extra,
) -> RunReport:
    results = [submatrix_inverse_proot(a, cfg, sched) for _ in range(args.repeats)]
    if args.residual:
        extra["residual_norm"] = residual_norm(a, results[0].x, cfg.p)
    if args.baseline_dense:
        extra["dense_baseline_ms"] = _dense_baseline_ms(a, cfg)
    report = make_report("bench", matrix_id, a, cfg, sched, results, **extra)
    logger.info(
        "bench 项完成",
        extra={"matrix_id": matrix_id, "workers": sched.workers, "wall_time_ms": report.wall_time_ms},
    )
    return report


def _with_workers(sched: SchedulerConfig, workers: int) -> SchedulerConfig:
    return SchedulerConfig(
        workers=workers, strategy=sched.strategy, seed=sched.seed, chunk=sched.chunk
    )


def _bench_cores(args, cfg, sched) -> tuple[list[RunReport], list[str]]:
    density = args.density or 0.01
    if args.input:
        a = load_matrix(args.input)
        matrix_id = matrix_id_for(args.input)
    else:
        a = _generate(args, args.n, density, args.kappa)
        matrix_id = f"random-{args.kind}-n{args.n}-d{density!r}"
    workers_list = sorted(args.workers_list or [1, 2, 4, 8])
    reports = [
        _measure(args, matrix_id, a, cfg, _with_workers(sched, w)) for w in workers_list
    ]
    base = reports[0].wall_time_ms
    for r in reports:
        r.speedup = base / r.wall_time_ms if r.wall_time_ms > 0 else None
    return reports, [f"speedup relative to workers={workers_list[0]}"]


def _bench_sizes(args, cfg, sched, linear: bool) -> tuple[list[RunReport], list[str]]:
    sizes = sorted(args.sizes_list or [1024, 2048, 4096, 8192, 16384])
    reports = []
    for n in sizes:
        d = linear_density(n) if linear else (args.density or 0.01)
        a = _generate(args, n, d, args.kappa)
        reports.append(_measure(args, f"random-{args.kind}-n{n}-d{d!r}", a, cfg, sched))
    slope = loglog_slope([float(r.n) for r in reports], [r.wall_time_ms for r in reports])
    return reports, [f"loglog_slope={slope!r}"]


def _bench_error_surface(args, cfg, sched) -> tuple[list[RunReport], list[str]]:
    sizes = sorted(args.sizes_list or [256, 512, 1024, 2048])
    kappas = args.kappa_list or [2.0]
    density = args.density or 0.05
    args.residual = True
    reports = []
    for n in sizes:
        for kappa in kappas:
            a = _generate(args, n, density, kappa)
            matrix_id = f"random-{args.kind}-n{n}-k{kappa!r}"
            reports.append(_measure(args, matrix_id, a, cfg, sched, kappa=kappa))
    return reports, []


def plot_reports(reports: list[RunReport], mode: BenchMode, path: str) -> None:
    """把 bench 结果画成 log-log 图（error-surface 画残差，其余画耗时）"""
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if mode == BenchMode.CORES:
        xs = [r.workers for r in reports]
        ax.loglog(xs, [r.wall_time_ms for r in reports], "o-", base=2)
        ax.set_xlabel("workers")
        ax.set_ylabel("wall time [ms]")
    elif mode == BenchMode.ERROR_SURFACE:
        for kappa in sorted({r.kappa for r in reports if r.kappa is not None}):
            rows = [r for r in reports if r.kappa == kappa]
            ax.loglog([r.n for r in rows], [r.residual_norm for r in rows], "o-", label=f"κ={kappa:g}")
        ax.set_xlabel("n")
        ax.set_ylabel("‖XᵖA − I‖₂")
        ax.legend()
    else:
        ax.loglog([r.n for r in reports], [r.wall_time_ms for r in reports], "o-")
        ax.set_xlabel("n")
        ax.set_ylabel("wall time [ms]")
    ax.set_title(mode.value)
    fig.savefig(path)
    plt.close(fig)


def run(args: argparse.Namespace) -> int:
    config = args.config
    cfg = MethodConfig(p=args.p, eig_solver=eig_solver_from_args(args, config))
    sched = scheduler_from_args(args, config)
    mode = BenchMode(args.mode)

    if mode == BenchMode.CORES:
        reports, comments = _bench_cores(args, cfg, sched)
    elif mode == BenchMode.ERROR_SURFACE:
        reports, comments = _bench_error_surface(args, cfg, sched)
    else:
        reports, comments = _bench_sizes(args, cfg, sched, linear=mode == BenchMode.SIZES_LINEAR_D)

    emit_reports(reports, args.report, config, args.log_buffer, comments)
    if args.plot:
        plot_reports(reports, mode, args.plot)
    if args.csv and not export_reports_csv(reports, args.csv):
        return 1
    return 0
