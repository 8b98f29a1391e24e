"""
CLI module
命令列介面：設定、子命令與表格輸出
"""

from .config import RunConfig, SweepSpec
from .main import main

__all__ = ["RunConfig", "SweepSpec", "main"]
