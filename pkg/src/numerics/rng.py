"""
Random Streams - 可重現的隨機串流

每個 Monte-Carlo 任務擁有自己的 RngStream，串流由 (seed, stream_id) 決定：
相同的 (seed, stream_id) 必定產生相同序列，與執行緒數量無關。

取樣：
    • sample_gamma: Gamma(shape, 1)（numpy 的 Marsaglia–Tsang，shape < 1 時自動 boost）
    • sample_dirichlet: 正規化的獨立 Gamma 抽樣
    • sample_beta: Gamma 比值
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from errors import DomainError

_MAX_UINT64 = 2 ** 64

Size = Optional[Union[int, Tuple[int, ...]]]


@dataclass
class RngStream:
    """
    單一任務專用的隨機串流

    Attributes:
        seed: 實驗的基礎種子（0 ≤ seed < 2^64）
        stream_id: 串流編號，由 derive() 以雜湊衍生
    """
    seed: int
    stream_id: int = 0
    _generator: Optional[np.random.Generator] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= int(value) < _MAX_UINT64:
                raise DomainError(f"RngStream: {name} must be an integer in [0, 2^64), got {value!r}")
            setattr(self, name, int(value))

    @property
    def generator(self) -> np.random.Generator:
        """延遲建立的 PCG64 generator"""
        if self._generator is None:
            sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
            self._generator = np.random.Generator(np.random.PCG64(sequence))
        return self._generator

    def derive(self, *parts: int) -> "RngStream":
        """
        衍生子串流：stream_id = hash(seed, stream_id, *parts)

        Args:
            parts: 任務索引（非負整數）
        """
        if any(int(p) < 0 for p in parts):
            raise DomainError(f"RngStream.derive: parts must be non-negative, got {parts}")
        key = (self.stream_id,) + tuple(int(p) for p in parts)
        mixed = np.random.SeedSequence(entropy=self.seed, spawn_key=key)
        child_id = int(mixed.generate_state(1, dtype=np.uint64)[0])
        return RngStream(seed=self.seed, stream_id=child_id)


# ============================================================================
# Samplers
# ============================================================================

def sample_gamma(shape, rng: RngStream, size: Size = None):
    """
    Gamma(shape, 1) 抽樣

    Raises:
        DomainError: shape ≤ 0 或非有限值
    """
    shape_arr = np.asarray(shape, dtype=np.float64)
    if not np.all(np.isfinite(shape_arr)) or np.any(shape_arr <= 0.0):
        raise DomainError("sample_gamma: shape must be positive and finite")
    return rng.generator.standard_gamma(shape_arr, size=size)


def sample_dirichlet(gamma: np.ndarray, rng: RngStream, size: Optional[int] = None) -> np.ndarray:
    """
    Dirichlet(γ) 抽樣：g_k ~ Gamma(γ_k, 1)，p = g / Σ g

    Args:
        gamma: 長度 K ≥ 2 的正參數
        rng: 隨機串流
        size: 樣本數；None 回傳單一向量

    Returns:
        (K,) 或 (size, K) 的機率向量
    """
    alpha = np.asarray(gamma, dtype=np.float64)
    if alpha.ndim != 1 or alpha.shape[0] < 2:
        raise DomainError("sample_dirichlet: gamma must be a vector of length >= 2")
    n = 1 if size is None else int(size)
    if n < 0:
        raise DomainError(f"sample_dirichlet: size must be >= 0, got {size}")

    draws = sample_gamma(alpha, rng, size=(n, alpha.shape[0]))
    totals = draws.sum(axis=1)
    # 極小 γ 時整列可能全部下溢為 0，重抽該列
    empty = totals <= 0.0
    while np.any(empty):
        draws[empty] = sample_gamma(alpha, rng, size=(int(empty.sum()), alpha.shape[0]))
        totals = draws.sum(axis=1)
        empty = totals <= 0.0

    samples = draws / totals[:, None]
    if size is None:
        return samples[0]
    return samples


def sample_beta(a: float, b: float, rng: RngStream, size: Size = None):
    """Beta(a, b) 抽樣：X/(X+Y)，X ~ Gamma(a)，Y ~ Gamma(b)"""
    x = sample_gamma(a, rng, size=size)
    y = sample_gamma(b, rng, size=size)
    total = x + y
    with np.errstate(invalid="ignore"):
        value = np.where(total > 0.0, x / np.where(total > 0.0, total, 1.0), 0.5)
    if size is None:
        return float(value)
    return value
