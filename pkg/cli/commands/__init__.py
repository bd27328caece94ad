"""
子命令

每个模块提供 register(subparsers) 和 run(args) -> int。
"""
