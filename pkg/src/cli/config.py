"""
Run Configuration - 執行設定

優先順序：內建預設 < JSON 設定檔 < 明確的命令列旗標。
設定檔為扁平物件，鍵名與長旗標相同（'-' 改為 '_'），例如：
    {"k": 10, "delta": 0.2, "eps_a": 0.5, "modes": "cv,tlc,ds", "seed": 7}
"""

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from errors import DomainError, ValidationError
from uncertainty import UncertaintyProfile
from lira import DEFAULT_SAMPLES, HIGH_TNR, DisclosureKind, DisclosureMode, default_alphas
from lira.channel import DEFAULT_N_MC

logger = logging.getLogger(__name__)

# 預設值重現標準比較設定（K=10, Δ=0.2, ϵa=0.5, ϵe=0.25, q=0.2, T=0）
DEFAULTS: Dict[str, Any] = {
    "k": 10,
    "delta": 0.2,
    "eps_a": 0.5,
    "eps_e": 0.25,
    "modes": "cv,tlc,ds",
    "q": 0.2,
    "temperature": 0.0,
    "seed": 42,
    "samples": DEFAULT_SAMPLES,
    "n_mc": DEFAULT_N_MC,
    "alpha_points": 999,
    "format": "csv",
    "threads": 1,
    "margin": None,
    "out": None,
}

SWEEPABLE = ("delta", "eps_a", "eps_e", "q", "temperature", "k")


def parse_float_list(text: str) -> List[float]:
    """
    解析數值清單：'0.1,0.2,0.5' 或範圍 'start:stop:step'（含終點）
    """
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0.0 or stop < start:
            raise DomainError(f"invalid range {text!r}")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"not a list of numbers: {text!r}") from None


def resolve_threads(value) -> int:
    """'auto' → CPU 數；其他為正整數"""
    if value in (None, "auto"):
        return max(1, os.cpu_count() or 1)
    threads = int(value)
    if threads < 1:
        raise DomainError(f"--threads must be >= 1 or 'auto', got {value}")
    return threads


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """讀取 JSON 設定檔（扁平物件）"""
    if not path:
        return {}
    try:
        with Path(path).open("r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ValidationError(f"config file {path}: expected a JSON object")
    unknown = sorted(set(data) - set(DEFAULTS) - {"values", "param", "q_grid", "temperatures",
                                                    "hypothesis", "n", "model", "p_star", "tol",
                                                    "max_iter", "clamp"})
    if unknown:
        logger.warning(f"[Config] ignoring unknown keys in {path}: {', '.join(unknown)}")
    return {key.replace("-", "_"): value for key, value in data.items()}


@dataclass
class RunConfig:
    """
    一次執行的完整設定

    Attributes:
        profile: 不確定性設定
        modes: 揭露模式清單
        n_samples: CV/TLC 每個假設的樣本數
        n_mc: DS 結果分佈的抽樣數
        seed: 基礎種子
        alpha_points: α 內部網格點數
        output_path: 輸出檔（None 為 stdout）
        format: 'csv' 或 'json'
        threads: 執行緒數（不影響結果）
        margin: δ_{T,q} 的單純形裁切下限（None 隨溫度自動決定）
    """
    profile: UncertaintyProfile = field(default_factory=UncertaintyProfile)
    modes: List[DisclosureMode] = field(default_factory=lambda: [
        DisclosureMode.cv(), DisclosureMode.tlc(), DisclosureMode.ds(0.2, 0.0),
    ])
    n_samples: int = DEFAULT_SAMPLES
    n_mc: int = DEFAULT_N_MC
    seed: int = 42
    alpha_points: int = 999
    output_path: Optional[str] = None
    format: str = "csv"
    threads: int = 1
    margin: Optional[float] = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        self.profile.validate()
        if not self.modes:
            raise ValidationError("at least one disclosure mode is required")
        if self.format not in ("csv", "json"):
            raise ValidationError(f"format must be csv or json, got {self.format!r}")
        if self.alpha_points < 2:
            raise ValidationError(f"alpha grid needs >= 2 points, got {self.alpha_points}")
        if self.n_samples < 1 or self.n_mc < 1:
            raise ValidationError("sample counts must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError(f"seed must lie in [0, 2^64), got {self.seed}")
        if self.threads < 1:
            raise ValidationError(f"threads must be >= 1, got {self.threads}")
        if self.margin is not None and not 0.0 <= self.margin < 1.0 / self.profile.k:
            raise ValidationError(f"margin must lie in [0, 1/k), got {self.margin}")

    def alphas(self) -> np.ndarray:
        """均勻內部網格，並確保含 α = 0.999（高 TNR 優勢）"""
        return np.union1d(default_alphas(self.alpha_points), [HIGH_TNR])

    def embedded(self) -> Dict[str, Any]:
        """嵌入輸出檔的設定（只含影響結果的欄位；threads 與輸出路徑不列入）"""
        return {
            "profile": self.profile.to_dict(),
            "modes": [mode.label for mode in self.modes],
            "n_samples": self.n_samples,
            "n_mc": self.n_mc,
            "seed": self.seed,
            "alpha_points": self.alpha_points,
            "margin": self.margin,
        }

    @classmethod
    def from_options(cls, options: Dict[str, Any]) -> "RunConfig":
        """由合併後的選項字典建立（缺少的鍵使用 DEFAULTS）"""
        def get(key):
            value = options.get(key)
            return DEFAULTS[key] if value is None else value

        profile = UncertaintyProfile(
            k=int(get("k")),
            delta=float(get("delta")),
            eps_a=float(get("eps_a")),
            eps_e=float(get("eps_e")),
        )
        modes_value = get("modes")
        names = modes_value if isinstance(modes_value, (list, tuple)) else str(modes_value).split(",")
        modes = [
            DisclosureMode.parse(name, q=float(get("q")), temperature=float(get("temperature")))
            for name in names if str(name).strip()
        ]
        return cls(
            profile=profile,
            modes=modes,
            n_samples=int(get("samples")),
            n_mc=int(get("n_mc")),
            seed=int(get("seed")),
            alpha_points=int(get("alpha_points")),
            output_path=options.get("out"),
            format=str(get("format")),
            threads=resolve_threads(get("threads")),
            margin=None if get("margin") is None else float(get("margin")),
        )


@dataclass
class SweepSpec:
    """
    參數掃描

    Attributes:
        parameter: 掃描的參數（delta, eps_a, eps_e, q, temperature, k）
        values: 依序的數值
        base: 其餘參數固定的設定
    """
    parameter: str
    values: Sequence[float]
    base: RunConfig

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ValidationError(
                f"cannot sweep {self.parameter!r}; choose one of {', '.join(SWEEPABLE)}"
            )
        if len(self.values) == 0:
            raise ValidationError("sweep needs at least one value")

    def cell(self, value: float) -> RunConfig:
        """
        某個掃描值的設定

        Raises:
            ValidationError / DomainError: 該值無效
        """
        base = self.base
        if self.parameter in ("q", "temperature"):
            modes = [
                DisclosureMode.ds(
                    value if self.parameter == "q" else mode.q,
                    value if self.parameter == "temperature" else mode.temperature,
                ) if mode.kind is DisclosureKind.DS else mode
                for mode in base.modes
            ]
            profile = base.profile
        else:
            modes = base.modes
            cast = int(round(value)) if self.parameter == "k" else float(value)
            profile = base.profile.replace(**{self.parameter: cast})
        return RunConfig(
            profile=profile,
            modes=modes,
            n_samples=base.n_samples,
            n_mc=base.n_mc,
            seed=base.seed,
            alpha_points=base.alpha_points,
            output_path=base.output_path,
            format=base.format,
            threads=base.threads,
            margin=base.margin,
        )
