"""energy：子矩阵方法正交化后的能带结构能量"""

from __future__ import annotations

import argparse

from src.apps import band_energy_sm
from src.sparse_core import load_matrix

from ..common import add_scheduler_args, scheduler_from_args


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("energy", help="比较 E_BS 与子矩阵方法得到的 E_BS^sm")
    parser.add_argument("--s", required=True, help="重叠矩阵 S")
    parser.add_argument("--p-matrix", required=True, help="密度矩阵 P")
    parser.add_argument("--h", required=True, help="Hamilton 矩阵 H")
    add_scheduler_args(parser)
    parser.set_defaults(handler=run, parser=parser)


def run(args: argparse.Namespace) -> int:
    s = load_matrix(args.s)
    p = load_matrix(args.p_matrix)
    h = load_matrix(args.h)
    report = band_energy_sm(s, p, h, scheduler_from_args(args, args.config))
    print(f"e_bs={report.e_bs!r}")
    print(f"e_bs_sm={report.e_bs_sm!r}")
    print(f"delta_rel={report.delta_rel!r}")
    return 0
