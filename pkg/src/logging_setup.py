"""
Logging setup
統一的 logger 設定，訊息沿用 [Component] 前綴
"""

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(message)s"

_LEVELS = {-1: logging.ERROR, 0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}


def configure_logging(verbosity: int = 0) -> None:
    """
    安裝單一 stderr handler

    Args:
        verbosity: -1 = 只顯示錯誤, 0 = 警告, 1 = 資訊, 2 = 除錯
    """
    level = _LEVELS[max(-1, min(verbosity, 2))]
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%H:%M:%S"))
    root.addHandler(handler)
    root.setLevel(level)
