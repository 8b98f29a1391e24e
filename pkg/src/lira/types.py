"""
LiRA Types - 揭露模式、trade-off 曲線與決策集 pmf

三種揭露模式：
    • CV: 完整信心向量
    • TLC: 只有真實標籤的信心
    • DS: 門檻 q 的決策集（溫度 T 控制隨機化，T = 0 為確定性門檻）
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import DomainError


class DisclosureKind(str, Enum):
    """揭露模式類型"""
    CV = "cv"       # confidence vector
    TLC = "tlc"     # true-label confidence
    DS = "ds"       # decision set


@dataclass(frozen=True)
class DisclosureMode:
    """
    揭露模式

    Attributes:
        kind: 模式類型
        q: 決策集門檻（僅 DS）
        temperature: σ_T 的溫度（僅 DS，0 為硬門檻）
    """
    kind: DisclosureKind
    q: Optional[float] = None
    temperature: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", DisclosureKind(self.kind))
        if self.kind is DisclosureKind.DS:
            if self.q is None or self.temperature is None:
                raise DomainError("DS disclosure requires both q and temperature")
            if not 0.0 <= self.q <= 1.0:
                raise DomainError(f"DS threshold q must lie in [0, 1], got {self.q}")
            if not self.temperature >= 0.0:
                raise DomainError(f"DS temperature must be >= 0, got {self.temperature}")
            object.__setattr__(self, "q", float(self.q))
            object.__setattr__(self, "temperature", float(self.temperature))
        elif self.q is not None or self.temperature is not None:
            raise DomainError(f"q and temperature apply to DS disclosure only, not {self.kind.value}")

    @classmethod
    def cv(cls) -> "DisclosureMode":
        return cls(DisclosureKind.CV)

    @classmethod
    def tlc(cls) -> "DisclosureMode":
        return cls(DisclosureKind.TLC)

    @classmethod
    def ds(cls, q: float, temperature: float = 0.0) -> "DisclosureMode":
        return cls(DisclosureKind.DS, q=q, temperature=temperature)

    @classmethod
    def parse(cls, name: str, q: float = 0.2, temperature: float = 0.0) -> "DisclosureMode":
        """由名稱建立（'cv' / 'tlc' / 'ds'），DS 使用給定的 q 與 T"""
        try:
            kind = DisclosureKind(name.strip().lower())
        except ValueError:
            raise DomainError(f"unknown disclosure mode {name!r} (expected cv, tlc or ds)") from None
        if kind is DisclosureKind.DS:
            return cls.ds(q, temperature)
        return cls(kind)

    @property
    def label(self) -> str:
        if self.kind is DisclosureKind.DS:
            return f"DS(q={self.q:g},T={self.temperature:g})"
        return self.kind.value.upper()

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind.value, "q": self.q, "temperature": self.temperature}


def validate_alphas(alphas) -> np.ndarray:
    """α 網格必須嚴格位於 (0,1) 內且遞增"""
    grid = np.asarray(alphas, dtype=np.float64)
    if grid.ndim != 1 or grid.shape[0] < 2:
        raise DomainError("alpha grid needs at least two points")
    if not np.all(np.isfinite(grid)) or grid[0] <= 0.0 or grid[-1] >= 1.0:
        raise DomainError("alpha grid must lie strictly inside (0, 1)")
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError("alpha grid must be strictly increasing")
    return grid


def default_alphas(points: int = 999) -> np.ndarray:
    """均勻內部網格 i/(points+1), i = 1..points"""
    if points < 2:
        raise DomainError(f"alpha grid needs at least two points, got {points}")
    return np.arange(1, points + 1, dtype=np.float64) / (points + 1)


@dataclass
class TradeoffCurve:
    """
    Trade-off 曲線 β_α

    Attributes:
        alphas: TNR 網格（遞增）
        betas: 對應的 FNR
        mode: 揭露模式（下界曲線可為 None）
        n_samples: 每個假設的樣本數（解析曲線為 0）
        seed: 產生曲線的種子
        clamped: 被截斷的 log-density 次數
    """
    alphas: np.ndarray
    betas: np.ndarray
    mode: Optional[DisclosureMode] = None
    n_samples: int = 0
    seed: Optional[int] = None
    clamped: int = 0

    def __post_init__(self):
        self.alphas = np.asarray(self.alphas, dtype=np.float64)
        self.betas = np.asarray(self.betas, dtype=np.float64)
        if self.alphas.shape != self.betas.shape or self.alphas.ndim != 1:
            raise DomainError("alphas and betas must be vectors of equal length")
        if self.alphas.shape[0] < 2:
            raise DomainError("a trade-off curve needs at least two points")
        if np.any(np.diff(self.alphas) <= 0.0):
            raise DomainError("alphas must be strictly increasing")
        for name, arr in (("alphas", self.alphas), ("betas", self.betas)):
            if np.any(arr < 0.0) or np.any(arr > 1.0):
                raise DomainError(f"{name} must lie in [0, 1]")

    @property
    def points(self) -> List[Tuple[float, float]]:
        return list(zip(self.alphas.tolist(), self.betas.tolist()))

    @property
    def advantages(self) -> np.ndarray:
        return self.alphas - self.betas

    def std_error(self) -> np.ndarray:
        """每個網格點的 MC 標準誤差 √(β(1−β)/n + α(1−α)/n)；解析曲線為 0"""
        if self.n_samples <= 0:
            return np.zeros_like(self.betas)
        a, b = self.alphas, self.betas
        return np.sqrt((b * (1.0 - b) + a * (1.0 - a)) / self.n_samples)

    @classmethod
    def diagonal(cls, alphas) -> "TradeoffCurve":
        """不知情攻擊者 β_α = α"""
        grid = np.asarray(alphas, dtype=np.float64)
        return cls(alphas=grid, betas=grid.copy())


@dataclass
class DsPmfPair:
    """
    決策集結果在兩個假設下的分佈

    Attributes:
        outcomes: (2^K, K) 的 0/1 矩陣，第 b 列為結果 b
        pmf_out, pmf_in: 每個結果的機率
        n_mc: 每個假設的 Dirichlet 抽樣數（0 表示精確值）
    """
    outcomes: np.ndarray
    pmf_out: np.ndarray
    pmf_in: np.ndarray
    n_mc: int = 0

    def __post_init__(self):
        self.pmf_out = np.asarray(self.pmf_out, dtype=np.float64)
        self.pmf_in = np.asarray(self.pmf_in, dtype=np.float64)
        n_outcomes = self.outcomes.shape[0]
        for name, pmf in (("pmf_out", self.pmf_out), ("pmf_in", self.pmf_in)):
            if pmf.shape != (n_outcomes,):
                raise DomainError(f"{name} must have {n_outcomes} entries")
            if np.any(pmf < 0.0):
                raise DomainError(f"{name} has negative entries")
            if abs(pmf.sum() - 1.0) > 1e-9:
                raise DomainError(f"{name} sums to {pmf.sum()!r}, not 1")

    @property
    def k(self) -> int:
        return int(self.outcomes.shape[1])

    def llr(self) -> np.ndarray:
        """每個結果的 ln pmf_out − ln pmf_in（支撐不一致時為 ±∞，兩者皆 0 時為 0）"""
        out, inn = self.pmf_out, self.pmf_in
        with np.errstate(divide="ignore", invalid="ignore"):
            value = np.log(out) - np.log(inn)
        value[(out == 0.0) & (inn == 0.0)] = 0.0
        return value
