"""
Error Types
實驗室共用的例外型別

階層：
    • LabError: 根例外
    • DomainError: 數值參數不在定義域內
    • ValidationError: 模型不變量被違反（訊息包含不等式原文）
    • BracketingError: 根搜尋區間沒有變號
    • SizeError: 超過列舉上限（K > 16）
    • RangeError: 內插超出曲線範圍
    • IngestionError: CSV 讀取失敗（附行號）
    • ConsistencyError: 內部交叉驗證失敗
"""

from typing import Optional


class LabError(Exception):
    """所有實驗室錯誤的基底類別"""


class DomainError(LabError, ValueError):
    """數值參數不在定義域內"""


class ValidationError(LabError, ValueError):
    """模型不變量被違反

    Args:
        message: 錯誤描述
        inequality: 被違反的不等式原文（CLI 直接顯示）
    """

    def __init__(self, message: str, inequality: Optional[str] = None):
        if inequality:
            message = f"{message} (requires {inequality})"
        super().__init__(message)
        self.inequality = inequality


class BracketingError(LabError, ValueError):
    """根搜尋區間兩端函數值同號"""


class SizeError(LabError, ValueError):
    """超過精確列舉的大小上限"""


class RangeError(LabError, ValueError):
    """查詢點超出曲線的 α 範圍"""


class IngestionError(LabError, ValueError):
    """CSV 讀取失敗

    Args:
        message: 錯誤描述
        line: 出錯的行號（1-based，None 表示整個檔案）
    """

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConsistencyError(LabError, RuntimeError):
    """兩條計算路徑的結果不一致"""
