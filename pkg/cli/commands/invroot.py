"""invroot：对 Matrix Market 矩阵运行子矩阵方法"""

from __future__ import annotations

import argparse
import logging

import numpy as np

from src.kernels import EigSolver
from src.sparse_core import load_matrix, save_matrix
from src.submatrix import (
    Kernel,
    MethodConfig,
    RefineConfig,
    reference_inverse_proot,
    residual_norm,
    submatrix_inverse_proot,
)

from ..common import (
    add_scheduler_args,
    eig_solver_from_args,
    emit_reports,
    make_report,
    matrix_id_for,
    positive_float,
    positive_int,
    scheduler_from_args,
)

logger = logging.getLogger(__name__)

# --check 的朴素参考实现只适用于小矩阵
CHECK_LIMIT = 2048


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("invroot", help="计算近似逆 p 次根")
    parser.add_argument("--in", dest="input", required=True, help="输入矩阵 (Matrix Market)")
    parser.add_argument("--p", type=positive_int, default=1, help="逆 p 次根的 p (默认: 1)")
    parser.add_argument("--kernel", choices=[k.value for k in Kernel], default=None)
    parser.add_argument("--eig-solver", choices=[s.value for s in EigSolver], default=None)
    parser.add_argument("--symmetrize", action="store_true", help="输出 (X + Xᵀ)/2")
    parser.add_argument("--refine-tol", type=positive_float, default=None, help="子矩阵 Newton 精化阈值")
    parser.add_argument("--refine-max-iter", type=positive_int, default=20)
    parser.add_argument("--out", default=None, help="结果矩阵输出文件")
    parser.add_argument("--report", default=None, help="报告输出文件 (默认: stdout)")
    parser.add_argument("--residual", action="store_true", help="计算 ‖XᵖA − I‖₂")
    parser.add_argument("--check", action="store_true", help=f"与朴素参考实现比较 (n ≤ {CHECK_LIMIT})")
    add_scheduler_args(parser)
    parser.set_defaults(handler=run, parser=parser)


def run(args: argparse.Namespace) -> int:
    config = args.config
    if args.kernel == Kernel.LU.value and args.p != 1:
        args.parser.error("--kernel lu 只支持 --p 1")
    refine = RefineConfig(args.refine_tol, args.refine_max_iter) if args.refine_tol else None
    cfg = MethodConfig(
        p=args.p,
        kernel=Kernel(args.kernel) if args.kernel else None,
        eig_solver=eig_solver_from_args(args, config),
        refine=refine,
        symmetrize=args.symmetrize,
    )
    sched = scheduler_from_args(args, config)

    a = load_matrix(args.input)
    if args.check and a.n > CHECK_LIMIT:
        args.parser.error(f"--check 只支持 n ≤ {CHECK_LIMIT}，输入 n = {a.n}")

    result = submatrix_inverse_proot(a, cfg, sched)
    if args.out:
        save_matrix(result.x, args.out)

    extra: dict = {}
    if args.residual:
        extra["residual_norm"] = residual_norm(a, result.x, cfg.p)
    if args.check:
        ref = reference_inverse_proot(a, cfg)
        extra["oracle_max_abs_diff"] = float(np.max(np.abs(result.x.val - ref.val), initial=0.0))

    buffer = args.log_buffer
    report = make_report(
        "invroot",
        matrix_id_for(args.input),
        a,
        cfg,
        sched,
        [result],
        warnings=buffer.count(),
        **extra,
    )
    emit_reports([report], args.report, config, buffer)
    return 0
