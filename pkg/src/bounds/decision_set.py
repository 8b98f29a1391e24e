"""
Decision-Set Contraction Factor - 決策集通道的收縮係數 δ_{T,q}

δ_{T,q} = √( max_{p,p′} TV( ∏_k Bern(σ_T(p_k − q)), ∏_k Bern(σ_T(p′_k − q)) ) )

最大化策略：
    1. 結構化候選：均勻向量 + 兩點混合（201 點網格）。
       由於標籤置換不改變 TV，第一個向量只取 (0,1) 上的混合，
       第二個向量取 (0,1)、(0,2)、(1,2)、(2,3) 上的混合。
    2. 以座標對質量轉移做 200 次有界一維搜尋（scipy minimize_scalar）。
    3. K = 2 另外做步長 1e-3 的窮舉網格。

單純形被裁切為分量 ≥ m(T) = min(20·T, 2e-3)，代表 Dirichlet 輸出的開支撐。
m(T) 隨 T → 0 消失：T = 0 時在完整單純形上取硬門檻，任何內部 q 都得到 δ = 1；
T > 0 時 σ_T(m(T) − 0) ≥ σ(20)，所以 q ∈ {0, 1} 的 δ 趨近 0。
"""

import logging
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from errors import DomainError, SizeError
from numerics import MAX_ENUMERATION_K, product_bernoulli_pmf, soft_threshold

logger = logging.getLogger(__name__)

MARGIN_PER_TEMPERATURE = 20.0   # m(T) = 20·T，σ(20) ≈ 1 − 2e-9
MAX_SUPPORT_MARGIN = 2e-3       # m(T) 的上限
MIXTURE_GRID = 201          # 兩點混合的網格點數
REFINE_ITERATIONS = 200     # 座標搜尋次數
K2_GRID_STEP = 1e-3         # K = 2 窮舉網格步長
_CHUNK = 64                 # 均勻向量配對時每批候選數


def tv_product_bernoulli(u: np.ndarray, v: np.ndarray) -> float:
    """
    兩個乘積 Bernoulli 分佈的 total variation（精確列舉 2^K 個結果）

    相同的座標對 TV 沒有貢獻，列舉前先移除。

    Raises:
        SizeError: K > 16
        DomainError: 長度不同或機率不在 [0,1]
    """
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.ndim != 1 or a.shape != b.shape:
        raise DomainError(f"tv_product_bernoulli: shapes differ ({a.shape} vs {b.shape})")
    if a.shape[0] > MAX_ENUMERATION_K:
        raise SizeError(
            f"tv_product_bernoulli: K={a.shape[0]} exceeds the exact enumeration bound "
            f"{MAX_ENUMERATION_K}; use the Monte Carlo outcome pmfs instead"
        )
    for arr in (a, b):
        if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
            raise DomainError("tv_product_bernoulli: probabilities must lie in [0, 1]")
    differ = a != b
    if not np.any(differ):
        return 0.0
    p = product_bernoulli_pmf(a[differ])
    q = product_bernoulli_pmf(b[differ])
    return float(min(0.5 * np.abs(p - q).sum(), 1.0))


class _ChannelSearch:
    """在裁切單純形上搜尋 TV 最大的向量對"""

    def __init__(self, temperature: float, q: float, k: int, margin: float):
        self.temperature = temperature
        self.q = q
        self.k = k
        self.margin = margin
        self.scale = 1.0 - k * margin

    def inclusion(self, w: np.ndarray) -> np.ndarray:
        """單純形座標 w → 每個標籤被納入的機率 σ_T(p − q)"""
        p = self.margin + self.scale * np.asarray(w)
        return soft_threshold(p - self.q, self.temperature)

    def tv(self, w: np.ndarray, w_other: np.ndarray) -> float:
        return tv_product_bernoulli(self.inclusion(w), self.inclusion(w_other))

    # ------------------------------------------------------------------
    # Structured candidates
    # ------------------------------------------------------------------

    def _mixtures(self, pairs: List[Tuple[int, int]]) -> np.ndarray:
        t = np.linspace(0.0, 1.0, MIXTURE_GRID)
        blocks = []
        for i, j in pairs:
            block = np.zeros((MIXTURE_GRID, self.k))
            block[:, i] = t
            block[:, j] = 1.0 - t
            blocks.append(block)
        return np.vstack(blocks)

    def structured(self) -> Tuple[float, np.ndarray, np.ndarray]:
        k = self.k
        uniform = np.full(k, 1.0 / k)
        first = self._mixtures([(0, 1)])
        second_pairs = [(i, j) for i, j in ((0, 1), (0, 2), (1, 2), (2, 3)) if j < k]
        second = self._mixtures(second_pairs)

        # 混合對混合：只有前 m 個座標不同
        m = min(k, 4)
        pmf_first = product_bernoulli_pmf(self.inclusion(first)[:, :m])
        pmf_second = product_bernoulli_pmf(self.inclusion(second)[:, :m])
        tv_mix = np.empty((first.shape[0], second.shape[0]))
        for start in range(0, first.shape[0], _CHUNK):
            stop = start + _CHUNK
            tv_mix[start:stop] = 0.5 * np.abs(
                pmf_first[start:stop, None, :] - pmf_second[None, :, :]
            ).sum(axis=-1)
        i, j = np.unravel_index(np.argmax(tv_mix), tv_mix.shape)
        best = (float(tv_mix[i, j]), first[i], second[j])

        # 均勻向量對全部候選
        candidates = np.vstack([first, second])
        pmf_uniform = product_bernoulli_pmf(self.inclusion(uniform))
        for start in range(0, candidates.shape[0], _CHUNK):
            chunk = candidates[start:start + _CHUNK]
            pmf_chunk = product_bernoulli_pmf(self.inclusion(chunk))
            tv_chunk = 0.5 * np.abs(pmf_chunk - pmf_uniform[None, :]).sum(axis=-1)
            idx = int(np.argmax(tv_chunk))
            if tv_chunk[idx] > best[0]:
                best = (float(tv_chunk[idx]), uniform, chunk[idx])
        return best

    # ------------------------------------------------------------------
    # Refinement
    # ------------------------------------------------------------------

    def refine(self, value: float, w: np.ndarray, w_other: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
        """在兩個單純形上輪流沿 e_i − e_j 方向做有界一維最大化"""
        vectors = [np.array(w, dtype=np.float64), np.array(w_other, dtype=np.float64)]
        pairs = list(combinations(range(self.k), 2))
        stale = 0
        for iteration in range(REFINE_ITERATIONS):
            i, j = pairs[iteration % len(pairs)]
            improved = False
            for side in (0, 1):
                base = vectors[side]
                other = vectors[1 - side]
                lo, hi = -base[i], base[j]
                if hi - lo < 1e-12:
                    continue

                def moved(s: float) -> np.ndarray:
                    trial = base.copy()
                    trial[i] += s
                    trial[j] -= s
                    return np.clip(trial, 0.0, None)

                def objective(s: float) -> float:
                    if side == 0:
                        return -self.tv(moved(s), other)
                    return -self.tv(other, moved(s))

                result = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                                         options={"xatol": 1e-9})
                for s in (float(result.x), lo, hi):
                    score = -objective(s)
                    if score > value + 1e-15:
                        value = score
                        vectors[side] = moved(s)
                        improved = True
            stale = 0 if improved else stale + 1
            if stale >= len(pairs):
                logger.debug(f"[DeltaFactor] refinement stalled after {iteration + 1} iterations")
                break
        return value, vectors[0], vectors[1]

    def exhaustive_k2(self) -> float:
        t = np.arange(0.0, 1.0 + 0.5 * K2_GRID_STEP, K2_GRID_STEP)
        w = np.column_stack([t, 1.0 - t])
        pmf = product_bernoulli_pmf(self.inclusion(w))
        best = 0.0
        for start in range(0, pmf.shape[0], _CHUNK * 4):
            block = 0.5 * np.abs(pmf[start:start + _CHUNK * 4, None, :] - pmf[None, :, :]).sum(axis=-1)
            best = max(best, float(block.max()))
        return best


def support_margin(temperature: float) -> float:
    """
    裁切單純形的分量下限 m(T) = min(20·T, 2e-3)

    T = 0 為 0（完整單純形）；T = ∞ 取上限。
    """
    if not temperature >= 0.0:
        raise DomainError(f"support_margin: temperature must be >= 0, got {temperature}")
    return float(min(MARGIN_PER_TEMPERATURE * temperature, MAX_SUPPORT_MARGIN))


@lru_cache(maxsize=256)
def delta_factor(temperature: float, q: float, k: int, margin: Optional[float] = None) -> float:
    """
    決策集通道的收縮係數 δ_{T,q} ∈ [0, 1]

    Args:
        temperature: σ_T 的溫度（0 為硬門檻，∞ 為完全隨機）
        q: 門檻
        k: 類別數（2 ≤ k ≤ 16）
        margin: 單純形分量下限；None 使用 support_margin(T)

    Raises:
        SizeError: k > 16
        DomainError: 參數不合法
    """
    if not temperature >= 0.0:
        raise DomainError(f"delta_factor: temperature must be >= 0, got {temperature}")
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"delta_factor: q must lie in [0, 1], got {q}")
    if k < 2:
        raise DomainError(f"delta_factor: k must be >= 2, got {k}")
    if k > MAX_ENUMERATION_K:
        raise SizeError(f"delta_factor: k={k} exceeds the enumeration bound {MAX_ENUMERATION_K}")
    if margin is None:
        margin = support_margin(temperature)
    if not 0.0 <= margin < 1.0 / k:
        raise DomainError(f"delta_factor: margin must lie in [0, 1/k), got {margin}")

    search = _ChannelSearch(float(temperature), float(q), int(k), float(margin))
    value, w, w_other = search.structured()
    value, w, w_other = search.refine(value, w, w_other)
    if k == 2:
        value = max(value, search.exhaustive_k2())

    delta = float(np.sqrt(min(max(value, 0.0), 1.0)))
    logger.info(f"[DeltaFactor] T={temperature:g} q={q:g} K={k} margin={margin:g} delta={delta:.6f}")
    return delta
