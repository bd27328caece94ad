"""gen：生成随机稀疏 SPD 矩阵"""

from __future__ import annotations

import argparse
import logging

from src.errors import BreakdownOnIndefinite, InfeasibleSpec
from src.sparse_core import (
    GeneratorSpec,
    MatrixKind,
    estimate_condition,
    generate_sparse_spd,
    save_matrix,
)

from ..common import positive_int

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("gen", help="生成随机稀疏 SPD 矩阵（Matrix Market）")
    parser.add_argument("--n", type=positive_int, required=True, help="矩阵阶数")
    parser.add_argument("--density", type=float, required=True, help="目标密度 nnz/n², (0, 1]")
    parser.add_argument("--kappa", type=float, default=2.0, help="目标条件数 ≥ 1 (默认: 2)")
    parser.add_argument(
        "--kind", choices=[k.value for k in MatrixKind], default=MatrixKind.BALANCED.value
    )
    parser.add_argument("--seed", type=int, default=0, help="随机种子 (默认: 0)")
    parser.add_argument("--out", required=True, help="输出文件")
    parser.add_argument("--no-estimate", action="store_true", help="跳过条件数估计")
    parser.set_defaults(handler=run, parser=parser)


def run(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        n=args.n, d=args.density, kappa=args.kappa, kind=MatrixKind(args.kind), seed=args.seed
    )
    try:
        spec.validate()
    except InfeasibleSpec as e:
        args.parser.error(str(e))

    a = generate_sparse_spd(spec)
    save_matrix(a, args.out)

    summary = f"n={a.n} nnz={a.nnz} density={a.density!r}"
    if not args.no_estimate:
        try:
            summary += f" kappa_est={estimate_condition(a)!r}"
        except BreakdownOnIndefinite as e:
            logger.warning("条件数估计失败", extra={"error": str(e)})
    print(f"{summary} out={args.out}")
    return 0
