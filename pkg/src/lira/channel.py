"""
Decision-Set Channel - 決策集揭露通道

每個標籤 k 以機率 σ_T(p_k − q) 獨立納入集合，結果 b ∈ {0,1}^K。
結果分佈以條件機率平均估計（不是計數）：

    pmf(b) = (1/n) Σ_i ∏_k σ_T((2b_k − 1)(p_k^(i) − q))

T > 0 時由 Taichi kernel 計算（外層對結果平行，內層序列累加，結果與執行緒數無關）；
T = 0 時結果為確定性，直接以 bincount 計數；T = ∞ 時為均勻分佈。
"""

import logging
import threading
from typing import Dict, List, Sequence

import numpy as np
import taichi as ti

from errors import DomainError, SizeError
from numerics import (
    MAX_ENUMERATION_K,
    RngStream,
    bit_outcomes,
    sample_blocks,
    sample_dirichlet,
    soft_threshold,
)
from uncertainty import DirichletPair
from lira.types import DisclosureKind, DisclosureMode, DsPmfPair

logger = logging.getLogger(__name__)

MIN_N_MC = 10_000
DEFAULT_N_MC = 100_000

_taichi_ready = False
# Taichi kernel 呼叫不可重入，掃描的工作執行緒共用此鎖
_KERNEL_LOCK = threading.Lock()


def init_taichi(threads: int = 0) -> None:
    """初始化 Taichi CPU 後端（f64）；只執行一次"""
    global _taichi_ready
    if _taichi_ready:
        return
    options = {"arch": ti.cpu, "default_fp": ti.f64, "log_level": ti.ERROR}
    if threads > 0:
        options["cpu_max_num_threads"] = int(threads)
    try:
        ti.init(**options)
    except Exception as exc:
        logger.warning(f"[DecisionSetChannel] taichi init with {options} failed ({exc}); using defaults")
        ti.init(arch=ti.cpu, default_fp=ti.f64)
    _taichi_ready = True


@ti.data_oriented
class DecisionSetChannel:
    """
    門檻 q、溫度 T 的決策集通道

    Args:
        k: 類別數（≤ 16）
        q: 門檻
        temperature: 溫度（0 為硬門檻）
    """

    def __init__(self, k: int, q: float, temperature: float):
        if k > MAX_ENUMERATION_K:
            raise SizeError(
                f"decision-set outcomes need K <= {MAX_ENUMERATION_K} for exact enumeration, got K={k}"
            )
        if not 0.0 <= q <= 1.0:
            raise DomainError(f"threshold q must lie in [0, 1], got {q}")
        if not temperature >= 0.0:
            raise DomainError(f"temperature must be >= 0, got {temperature}")
        self.k = int(k)
        self.q = float(q)
        self.temperature = float(temperature)
        self.n_outcomes = 2 ** self.k

    @classmethod
    def from_mode(cls, k: int, mode: DisclosureMode) -> "DecisionSetChannel":
        if mode.kind is not DisclosureKind.DS:
            raise DomainError(f"decision-set channel needs a DS mode, got {mode.label}")
        return cls(k, mode.q, mode.temperature)

    @ti.kernel
    def _accumulate(
        self,
        samples: ti.types.ndarray(dtype=ti.f64, ndim=2),
        q: ti.f64,
        inv_t: ti.f64,
        pmf: ti.types.ndarray(dtype=ti.f64, ndim=1),
    ):
        """pmf[b] = Σ_i ∏_j σ((2b_j − 1)(p_ij − q)/T)（未除以 n）"""
        n = samples.shape[0]
        k = samples.shape[1]
        for b in range(pmf.shape[0]):
            acc = 0.0
            for i in range(n):
                prob = 1.0
                for j in range(k):
                    sign = 2.0 * ti.cast((b >> j) & 1, ti.f64) - 1.0
                    prob *= 1.0 / (1.0 + ti.exp(-sign * (samples[i, j] - q) * inv_t))
                acc += prob
            pmf[b] = acc

    def outcome_pmf(self, samples: np.ndarray) -> np.ndarray:
        """
        由 Dirichlet 樣本估計結果分佈

        Args:
            samples: (n, K) 機率向量

        Returns:
            (2^K,) 機率，索引 b = Σ_j b_j 2^j
        """
        p = np.ascontiguousarray(samples, dtype=np.float64)
        if p.ndim != 2 or p.shape[1] != self.k or p.shape[0] == 0:
            raise DomainError(f"expected (n, {self.k}) samples, got {p.shape}")

        if np.isinf(self.temperature):
            return np.full(self.n_outcomes, 1.0 / self.n_outcomes)

        if self.temperature == 0.0:
            bits = (p >= self.q).astype(np.int64)
            index = bits @ (1 << np.arange(self.k, dtype=np.int64))
            counts = np.bincount(index, minlength=self.n_outcomes)
            return counts / float(p.shape[0])

        pmf = np.zeros(self.n_outcomes, dtype=np.float64)
        with _KERNEL_LOCK:
            init_taichi()
            self._accumulate(p, self.q, 1.0 / self.temperature, pmf)
        pmf /= p.shape[0]
        # 浮點累加誤差
        return pmf / pmf.sum()

    def set_sizes(self, samples: np.ndarray) -> np.ndarray:
        """每個樣本的期望集合大小 Σ_k σ_T(p_k − q)"""
        return soft_threshold(np.asarray(samples) - self.q, self.temperature).sum(axis=-1)


# ============================================================================
# Operations
# ============================================================================

def _draw(pair: DirichletPair, hypothesis: str, n_mc: int, rng: RngStream, label: int,
          threads: int) -> np.ndarray:
    gamma = pair.hypothesis(hypothesis)
    return sample_blocks(
        lambda stream, size: sample_dirichlet(gamma, stream, size=size),
        n_mc, rng, label=label, threads=threads,
    )


def ds_pmfs(
    pair: DirichletPair,
    mode: DisclosureMode,
    n_mc: int,
    rng: RngStream,
    threads: int = 1,
) -> DsPmfPair:
    """
    決策集結果在 out / in 假設下的分佈

    Raises:
        SizeError: K > 16
        DomainError: 非 DS 模式或 n_mc < 10^4
    """
    channel = DecisionSetChannel.from_mode(pair.k, mode)
    if n_mc < MIN_N_MC:
        raise DomainError(f"ds_pmfs: n_mc must be >= {MIN_N_MC}, got {n_mc}")
    if threads > 0 and mode.temperature not in (0.0, float("inf")):
        with _KERNEL_LOCK:
            init_taichi(threads)

    pmf_out = channel.outcome_pmf(_draw(pair, "out", n_mc, rng, 0, threads))
    pmf_in = channel.outcome_pmf(_draw(pair, "in", n_mc, rng, 1, threads))
    logger.info(f"[DecisionSetChannel] {mode.label} K={pair.k} n_mc={n_mc}")
    return DsPmfPair(outcomes=bit_outcomes(pair.k), pmf_out=pmf_out, pmf_in=pmf_in, n_mc=n_mc)


def expected_set_size(
    pair: DirichletPair,
    q: float,
    temperature: float,
    hypothesis: str,
    n_mc: int,
    rng: RngStream,
    threads: int = 1,
) -> float:
    """
    E[Σ_k σ_T(p_k − q)]，p ~ Dir(γ_hypothesis)

    Raises:
        DomainError: n_mc < 10^4 或參數不合法
    """
    if n_mc < MIN_N_MC:
        raise DomainError(f"expected_set_size: n_mc must be >= {MIN_N_MC}, got {n_mc}")
    channel = DecisionSetChannel(pair.k, q, temperature)
    label = 0 if hypothesis == "out" else 1
    samples = _draw(pair, hypothesis, n_mc, rng, label, threads)
    return float(channel.set_sizes(samples).mean())


def set_size_table(
    pair: DirichletPair,
    q_grid: Sequence[float],
    temperatures: Sequence[float],
    n_mc: int,
    rng: RngStream,
    threads: int = 1,
) -> List[Dict[str, float]]:
    """
    (q, T) 網格上的平均集合大小；每個假設只抽樣一次，所有格子共用樣本

    Returns:
        每列 {q, temperature, size_out, size_in, size_avg}
    """
    if n_mc < MIN_N_MC:
        raise DomainError(f"set_size_table: n_mc must be >= {MIN_N_MC}, got {n_mc}")
    samples = {
        "out": _draw(pair, "out", n_mc, rng, 0, threads),
        "in": _draw(pair, "in", n_mc, rng, 1, threads),
    }
    rows = []
    for temperature in temperatures:
        for q in q_grid:
            channel = DecisionSetChannel(pair.k, float(q), float(temperature))
            size_out = float(channel.set_sizes(samples["out"]).mean())
            size_in = float(channel.set_sizes(samples["in"]).mean())
            rows.append({
                "q": float(q),
                "temperature": float(temperature),
                "size_out": size_out,
                "size_in": size_in,
                "size_avg": 0.5 * (size_out + size_in),
            })
    return rows
