"""
Confidence Datasets - 信心向量資料集

CSV 格式：
    # 可選的註解行（只允許在標頭之前）
    p0,p1,...,p{K-1}
    0.61,0.05,...
每列 K 個小數，逗號分隔；LF 或 CRLF 皆可；結尾空行允許。
"""

import csv
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np

from errors import DomainError, IngestionError
from numerics import RngStream, sample_dirichlet
from uncertainty import DirichletPair

logger = logging.getLogger(__name__)

DEFAULT_CLAMP = 1e-6
# 儲存精度造成的列和誤差上限（超過時需 renormalize 才接受）
SUM_TOLERANCE = 1e-3
ROW_SUM_INVARIANT = 1e-6

PathLike = Union[str, os.PathLike]


@dataclass
class ConfidenceDataset:
    """
    信心向量資料集

    Attributes:
        rows: (n, K) 機率向量，索引 0 為真實標籤
        label: 'out' / 'in' / 'unknown'
        source: 來源描述
        rejected: 被拒絕的列 (行號, 原因)
    """
    rows: np.ndarray
    label: str = "unknown"
    source: str = ""
    rejected: List[Tuple[int, str]] = field(default_factory=list)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2 or self.rows.shape[1] < 2:
            raise DomainError(f"dataset rows must be an (n, K>=2) array, got shape {self.rows.shape}")
        if self.label not in ("out", "in", "unknown"):
            raise DomainError(f"dataset label must be 'out', 'in' or 'unknown', got {self.label!r}")
        if np.any(self.rows < 0.0) or np.any(self.rows > 1.0):
            raise DomainError("dataset components must lie in [0, 1]")
        if self.rows.shape[0] and np.max(np.abs(self.rows.sum(axis=1) - 1.0)) > ROW_SUM_INVARIANT:
            raise DomainError(f"dataset rows must sum to 1 within {ROW_SUM_INVARIANT}")

    @property
    def k(self) -> int:
        return int(self.rows.shape[1])

    @property
    def n(self) -> int:
        return int(self.rows.shape[0])

    @property
    def true_label_confidence(self) -> np.ndarray:
        return self.rows[:, 0]

    def header(self) -> List[str]:
        return [f"p{j}" for j in range(self.k)]


# ============================================================================
# CSV I/O
# ============================================================================

def _parse_row(values: List[str], k: int, line: int) -> np.ndarray:
    if len(values) != k:
        raise IngestionError(f"expected {k} values, found {len(values)}", line=line)
    try:
        row = np.array([float(v) for v in values], dtype=np.float64)
    except ValueError:
        raise IngestionError(f"non-numeric value in {values}", line=line) from None
    if not np.all(np.isfinite(row)) or np.any(row < 0.0) or np.any(row > 1.0):
        raise IngestionError("component outside [0, 1]", line=line)
    return row


def ingest_csv(
    path: PathLike,
    clamp: float = DEFAULT_CLAMP,
    renormalize: bool = True,
    label: str = "unknown",
) -> ConfidenceDataset:
    """
    讀取信心 CSV

    處理規則：
        • 分量低於 clamp 時提高到 clamp
        • 列和偏離 1 不超過 1e-3 時一律縮放回 1（儲存精度）
        • 偏離更大時：renormalize 開啟則縮放，關閉則報錯
        • 無法縮放的列（列和為 0）記錄在 rejected

    Raises:
        IngestionError: 標頭錯誤、欄數不符、數值錯誤或列和錯誤（含行號）
    """
    if not clamp >= 0.0 or clamp >= 0.5:
        raise DomainError(f"clamp must lie in [0, 0.5), got {clamp}")
    path = Path(path)
    rows: List[np.ndarray] = []
    rejected: List[Tuple[int, str]] = []
    k: Optional[int] = None
    saw_blank = False

    with path.open("r", encoding="utf-8", newline="") as handle:
        for line_no, raw in enumerate(handle, start=1):
            text = raw.rstrip("\r\n")
            if k is None:
                if text.startswith("#") or not text.strip():
                    continue
                header = [cell.strip() for cell in next(csv.reader([text]))]
                expected = [f"p{j}" for j in range(len(header))]
                if len(header) < 2 or header != expected:
                    raise IngestionError(f"malformed header {text!r} (expected p0,p1,...)", line=line_no)
                k = len(header)
                continue

            if not text.strip():
                saw_blank = True
                continue
            if saw_blank:
                raise IngestionError("data after a blank line", line=line_no)

            row = _parse_row(next(csv.reader([text])), k, line_no)
            total = row.sum()
            if abs(total - 1.0) > SUM_TOLERANCE and not renormalize:
                raise IngestionError(f"row sums to {total:.6g}, not 1", line=line_no)
            if clamp > 0.0:
                row = np.maximum(row, clamp)
            total = row.sum()
            if total <= 0.0:
                rejected.append((line_no, "row sums to zero"))
                continue
            rows.append(row / total)

    if k is None:
        raise IngestionError(f"{path}: missing header line")
    if not rows:
        raise IngestionError(f"{path}: no data rows")
    for line_no, reason in rejected:
        logger.warning(f"[Ingest] {path.name} line {line_no}: rejected ({reason})")
    logger.info(f"[Ingest] {path.name}: {len(rows)} rows, K={k}, rejected={len(rejected)}")
    return ConfidenceDataset(rows=np.vstack(rows), label=label, source=str(path), rejected=rejected)


def format_csv(dataset: ConfidenceDataset, comments: Iterable[str] = ()) -> str:
    """信心 CSV 文字（17 位有效數字），註解行置於標頭之前"""
    lines = [f"# {comment}" for comment in comments]
    lines.append(",".join(dataset.header()))
    lines.extend(",".join(f"{value:.17g}" for value in row) for row in dataset.rows)
    return "\n".join(lines) + "\n"


def write_csv(dataset: ConfidenceDataset, path: PathLike, comments: Iterable[str] = ()) -> None:
    """寫出信心 CSV"""
    Path(path).write_text(format_csv(dataset, comments), encoding="utf-8")


def generate_dataset(pair: DirichletPair, hypothesis: str, n: int, rng: RngStream) -> ConfidenceDataset:
    """
    由 Dirichlet 假設產生合成資料集

    Raises:
        DomainError: n < 1
    """
    if n < 1:
        raise DomainError(f"generate_dataset: n must be >= 1, got {n}")
    rows = sample_dirichlet(pair.hypothesis(hypothesis), rng, size=int(n))
    return ConfidenceDataset(
        rows=rows,
        label=hypothesis,
        source=f"dirichlet:{hypothesis}:seed={rng.seed}:stream={rng.stream_id}",
    )
