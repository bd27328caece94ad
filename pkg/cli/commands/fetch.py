"""fetch：下载并缓存 SuiteSparse 矩阵"""

from __future__ import annotations

import argparse
import asyncio

from src.utils import MatrixCache, SuiteSparseFetcher


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("fetch", help="从 SuiteSparse 下载矩阵")
    parser.add_argument("--group", required=True, help="矩阵组，如 JGD_Trefethen")
    parser.add_argument("--name", required=True, help="矩阵名，如 Trefethen_2000")
    parser.add_argument("--cache-dir", default=None, help="缓存目录")
    parser.add_argument("--base-url", default=None, help="下载地址 (默认: $SM_SUITESPARSE_URL 或配置)")
    parser.set_defaults(handler=run, parser=parser)


def run(args: argparse.Namespace) -> int:
    config = args.config
    cache = MatrixCache(args.cache_dir or config.cache_dir)
    fetcher = SuiteSparseFetcher(
        cache,
        base_url=args.base_url or config.suitesparse_url,
        timeout=config.http_timeout,
    )
    path = asyncio.run(fetcher.fetch(args.group, args.name))
    print(path)
    return 0
