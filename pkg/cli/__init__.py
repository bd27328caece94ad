"""submatrix 命令行"""
