"""
submatrix 命令行入口

用法：
    submatrix gen --n 1024 --density 0.05 --kappa 2 --out a.mtx
    submatrix invroot --in a.mtx --p 2 --workers 4 --residual
    submatrix precond --in Trefethen_2000.mtx --preconditioner sm
    submatrix fetch --group JGD_Trefethen --name Trefethen_2000
    submatrix bench --mode cores --n 8192 --density 0.01 --workers-list 1,2,4,8
    submatrix energy --s S.mtx --p-matrix P.mtx --h H.mtx
    submatrix cache list

退出码：0 成功；1 运行失败；2 参数错误；3 网络错误
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from src.config import ConfigManager
from src.errors import SubmatrixError, exit_code_for
from src.utils import capture_logs

from .commands import bench, cache, energy, fetch, gen, invroot, precond

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
COMMANDS = (gen, invroot, precond, fetch, bench, energy, cache)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="submatrix",
        description="稀疏对称正定矩阵的子矩阵方法（近似逆 p 次根）",
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="日志级别 (默认: WARNING)",
    )
    parser.add_argument("--config-dir", default=None, help="配置目录 (默认: $SM_CONFIG_DIR 或 ~/.submatrix)")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for module in COMMANDS:
        module.register(subparsers)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr, force=True)

    try:
        args.config = ConfigManager(args.config_dir).load_app_config()
        with capture_logs(logging.WARNING) as buffer:
            args.log_buffer = buffer
            return int(args.handler(args))
    except SubmatrixError as e:
        logger.error("命令执行失败", exc_info=args.log_level == "DEBUG")
        print(f"错误: {e}", file=sys.stderr)
        return exit_code_for(e)
    except OSError as e:
        print(f"错误: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        print("已中断", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
