"""precond：预条件 CG 迭代次数（b 为全一向量）"""

from __future__ import annotations

import argparse
import logging
import math
import time

import numpy as np

from src.apps import PreconditionerKind, solve_with_preconditioner
from src.errors import BreakdownOnIndefinite, CgBreakdown, NotSymmetric, ZeroPivot
from src.sparse_core import estimate_condition, load_matrix
from src.utils import RunReport

from ..common import (
    add_scheduler_args,
    emit_reports,
    matrix_id_for,
    positive_float,
    positive_int,
    scheduler_from_args,
)

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("precond", help="用 CG 求解 Ax = 1，输出迭代次数")
    parser.add_argument("--in", dest="input", required=True, help="输入矩阵 (Matrix Market)")
    parser.add_argument(
        "--preconditioner",
        choices=[k.value for k in PreconditionerKind],
        default=PreconditionerKind.NONE.value,
    )
    parser.add_argument("--tol", type=positive_float, default=None, help="相对残差阈值 (默认: 1e-6)")
    parser.add_argument("--maxiter", type=positive_int, default=None, help="迭代上限 (默认: 2n)")
    parser.add_argument("--name", default=None, help="输出中的矩阵名 (默认: 文件名)")
    parser.add_argument("--skip-kappa", action="store_true", help="跳过条件数估计")
    parser.add_argument("--report", default=None, help="同时写出报告文件")
    add_scheduler_args(parser)
    parser.set_defaults(handler=run, parser=parser)


def _kappa(a) -> float:
    try:
        return estimate_condition(a)
    except (BreakdownOnIndefinite, NotSymmetric) as e:
        logger.warning("条件数估计失败", extra={"error": str(e)})
        return math.nan


def run(args: argparse.Namespace) -> int:
    config = args.config
    a = load_matrix(args.input)
    name = args.name or matrix_id_for(args.input)
    kind = PreconditionerKind(args.preconditioner)
    sched = scheduler_from_args(args, config)
    tol = args.tol if args.tol is not None else config.cg_tol
    kappa = math.nan if args.skip_kappa else _kappa(a)

    start = time.perf_counter()
    outcome: str
    report = None
    try:
        report = solve_with_preconditioner(a, np.ones(a.n), kind, sched, tol=tol, max_iter=args.maxiter)
        outcome = str(report.iterations) if report.converged else "DNC"
    except (CgBreakdown, ZeroPivot) as e:
        logger.warning("求解失败", extra={"error": str(e)})
        outcome = "BREAKDOWN"
    elapsed_ms = (time.perf_counter() - start) * 1e3

    print(
        f"name={name} n={a.n} kappa_est={kappa!r} preconditioner={kind.value} iterations={outcome}"
    )

    if args.report:
        record = RunReport(
            command="precond",
            matrix_id=name,
            n=a.n,
            density=a.density,
            p=2 if kind == PreconditionerKind.SM else 1,
            strategy=sched.describe(),
            workers=sched.workers,
            wall_time_ms=elapsed_ms,
            kappa_est=None if math.isnan(kappa) else kappa,
            preconditioner=kind.value,
            iterations=report.iterations if report else None,
            converged=report.converged if report else False,
            residual_norm=report.final_residual if report else None,
            warnings=args.log_buffer.count(),
        )
        emit_reports([record], args.report, config, args.log_buffer)
    return 0
