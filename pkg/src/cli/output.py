"""
Output Tables - 長格式表格輸出

CSV：
    # config: {...}          設定（JSON，鍵排序）
    # summary: {...}         摘要（可多行）
    # skipped: ...           掃描時略過的無效點
    col1,col2,...
    ...
JSON：{"config": ..., "summary": [...], "skipped": [...], "columns": [...], "rows": [{col: value}]}

浮點數以 17 位有效數字（CSV）或 repr（JSON，同樣可精確還原）輸出；
不含時間戳記，相同設定輸出相同位元組。
"""

import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class Table:
    """長格式表格"""
    columns: List[str]
    rows: List[Sequence[Any]] = field(default_factory=list)
    summary: List[Dict[str, Any]] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(values)

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def _plain(value: Any) -> Any:
    """numpy 純量轉為 Python 型別"""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


def format_value(value: Any) -> str:
    value = _plain(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


def _compact_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"), default=_plain)


def render_csv(table: Table, config: Dict[str, Any]) -> str:
    buffer = io.StringIO()
    buffer.write(f"# config: {_compact_json(config)}\n")
    for entry in table.summary:
        buffer.write(f"# summary: {_compact_json(entry)}\n")
    for note in table.skipped:
        buffer.write(f"# skipped: {note}\n")
    buffer.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buffer.write(",".join(format_value(v) for v in row) + "\n")
    return buffer.getvalue()


def render_json(table: Table, config: Dict[str, Any]) -> str:
    document = {
        "config": config,
        "summary": table.summary,
        "skipped": table.skipped,
        "columns": table.columns,
        "rows": [{c: _plain(v) for c, v in zip(table.columns, row)} for row in table.rows],
    }
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False, default=_plain) + "\n"


def atomic_write(path: Path, text: str) -> None:
    """先寫入同目錄暫存檔再 os.replace；失敗時不留下部分輸出"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def emit(table: Table, config: Dict[str, Any], fmt: str = "csv", path: Optional[str] = None) -> None:
    """輸出表格到檔案（原子寫入）或 stdout"""
    text = render_json(table, config) if fmt == "json" else render_csv(table, config)
    if path:
        atomic_write(Path(path), text)
        logger.info(f"[Output] wrote {len(table.rows)} rows to {path}")
    else:
        sys.stdout.write(text)
