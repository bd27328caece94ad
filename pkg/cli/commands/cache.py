"""cache：查看或清除 SuiteSparse 缓存"""

from __future__ import annotations

import argparse

from src.utils import MatrixCache


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("cache", help="管理 SuiteSparse 缓存")
    parser.add_argument("action", choices=["list", "clear"])
    parser.add_argument("--name", default=None, help="只清除指定矩阵")
    parser.add_argument("--cache-dir", default=None, help="缓存目录")
    parser.set_defaults(handler=run, parser=parser)


def run(args: argparse.Namespace) -> int:
    cache = MatrixCache(args.cache_dir or args.config.cache_dir)
    if args.action == "clear":
        removed = cache.clear(args.name)
        print(f"removed={removed}")
        return 0
    stats = cache.get_stats()
    for entry in cache.list_entries():
        print(
            f"group={entry.group} name={entry.name} size_bytes={entry.size_bytes} "
            f"fetched_at={entry.fetched_at.isoformat()}"
        )
    print(f"# entries={stats['entries']} total_size_bytes={stats['total_size_bytes']}")
    return 0
