"""
子矩阵方法

稀疏对称正定矩阵的近似逆 p 次根、并行调度与预条件应用
"""

__version__ = "0.1.0"
