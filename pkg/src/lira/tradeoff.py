"""
LiRA Trade-off Simulator - Monte Carlo trade-off 曲線

CV / TLC：
    1. 各假設抽 n 個觀測，計算 LLR
    2. τ_α = out LLR 的經驗 (1−α) 分位數
    3. β_α = in LLR ≥ τ_α 的比例
DS：
    由結果分佈做精確的離散 Neyman–Pearson 檢定；依 LLR 由大到小累加，
    邊界結果以分數納入，所以每個 α 都可達（ROC 為分段線性）。
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from errors import DomainError, RangeError
from numerics import RngStream, sample_beta, sample_blocks, sample_dirichlet
from uncertainty import DirichletPair
from lira.types import DisclosureKind, DisclosureMode, DsPmfPair, TradeoffCurve, validate_alphas
from lira.llr import llr_cv_batch, llr_tlc_batch
from lira.channel import DEFAULT_N_MC, ds_pmfs

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100_000
DEFAULT_SAMPLES = 1_000_000
HIGH_TNR = 0.999


def empirical_betas(llr_out: np.ndarray, llr_in: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """
    經驗門檻檢定的 β_α

    拒絕「不在訓練集」的條件為 LLR < τ_α；β_α 為 in 樣本被判為 out 的比例。
    """
    thresholds = np.quantile(llr_out, 1.0 - alphas)
    sorted_in = np.sort(llr_in)
    below = np.searchsorted(sorted_in, thresholds, side="left")
    betas = 1.0 - below / float(sorted_in.shape[0])
    return np.maximum.accumulate(betas)


def discrete_roc_betas(pmfs: DsPmfPair, alphas: np.ndarray) -> np.ndarray:
    """
    離散通道的精確 trade-off：依 LLR 由大到小納入結果，累積 (α, β) 後線性內插
    """
    llr = pmfs.llr()
    order = np.argsort(-llr, kind="stable")
    cum_out = np.concatenate([[0.0], np.cumsum(pmfs.pmf_out[order])])
    cum_in = np.concatenate([[0.0], np.cumsum(pmfs.pmf_in[order])])
    cum_out /= cum_out[-1]
    cum_in /= cum_in[-1]
    betas = np.interp(alphas, cum_out, cum_in)
    return np.maximum.accumulate(np.clip(betas, 0.0, 1.0))


def _simulate_continuous(
    pair: DirichletPair,
    mode: DisclosureMode,
    n_samples: int,
    rng: RngStream,
    threads: int,
) -> Tuple[np.ndarray, np.ndarray, int]:
    if mode.kind is DisclosureKind.CV:
        def draw(gamma):
            return lambda stream, size: sample_dirichlet(gamma, stream, size=size)
        llr_fn = llr_cv_batch
        gammas = {"out": pair.gamma_out, "in": pair.gamma_in}
    else:
        marginal = pair.aggregated()

        def draw(gamma):
            return lambda stream, size: sample_beta(gamma[0], gamma[1], stream, size=size)
        llr_fn = llr_tlc_batch
        gammas = {"out": marginal.gamma_out, "in": marginal.gamma_in}

    obs_out = sample_blocks(draw(gammas["out"]), n_samples, rng, label=0, threads=threads)
    obs_in = sample_blocks(draw(gammas["in"]), n_samples, rng, label=1, threads=threads)
    llr_out, clamped_out = llr_fn(obs_out, pair)
    llr_in, clamped_in = llr_fn(obs_in, pair)
    return llr_out, llr_in, clamped_out + clamped_in


def simulate_tradeoff(
    pair: DirichletPair,
    mode: DisclosureMode,
    n_samples: int,
    alphas,
    rng: RngStream,
    n_mc: int = DEFAULT_N_MC,
    threads: int = 1,
    pmfs: Optional[DsPmfPair] = None,
) -> TradeoffCurve:
    """
    模擬 LiRA 的 trade-off 曲線

    Args:
        pair: Dirichlet 參數對
        mode: 揭露模式
        n_samples: CV/TLC 每個假設的樣本數（≥ 10^5）
        alphas: 嚴格位於 (0,1) 的遞增 α 網格
        rng: 隨機串流
        n_mc: DS 結果分佈的抽樣數
        threads: 抽樣執行緒數（不影響結果）
        pmfs: 已計算好的 DS 結果分佈（省略時重新估計）

    Raises:
        DomainError: 網格不合法或樣本數不足
    """
    grid = validate_alphas(alphas)

    if mode.kind is DisclosureKind.DS:
        if pmfs is None:
            pmfs = ds_pmfs(pair, mode, n_mc, rng.derive(2), threads=threads)
        betas = discrete_roc_betas(pmfs, grid)
        return TradeoffCurve(alphas=grid, betas=betas, mode=mode, n_samples=pmfs.n_mc, seed=rng.seed)

    if n_samples < MIN_SAMPLES:
        raise DomainError(f"simulate_tradeoff: n_samples must be >= {MIN_SAMPLES}, got {n_samples}")
    llr_out, llr_in, clamped = _simulate_continuous(pair, mode, int(n_samples), rng, threads)
    if clamped:
        logger.warning(f"[LiRASimulator] {mode.label} clamped {clamped} log-density evaluations")
    betas = empirical_betas(llr_out, llr_in, grid)
    logger.info(f"[LiRASimulator] {mode.label} n={n_samples} clamped={clamped}")
    return TradeoffCurve(
        alphas=grid, betas=betas, mode=mode, n_samples=int(n_samples), seed=rng.seed, clamped=clamped,
    )


def avg_advantage(curve: TradeoffCurve) -> float:
    """α 均勻分佈下的平均優勢：∫(α − β)dα / (α_max − α_min)，梯形法"""
    span = curve.alphas[-1] - curve.alphas[0]
    return float(trapezoid(curve.alphas - curve.betas, curve.alphas) / span)


def advantage_at(curve: TradeoffCurve, alpha: float = HIGH_TNR) -> float:
    """
    α − β_α（線性內插）

    Raises:
        RangeError: α 超出曲線範圍
    """
    if not curve.alphas[0] <= alpha <= curve.alphas[-1]:
        raise RangeError(
            f"alpha={alpha} outside the curve span [{curve.alphas[0]}, {curve.alphas[-1]}]"
        )
    return float(alpha - np.interp(alpha, curve.alphas, curve.betas))


def advantage_std_error(curve: TradeoffCurve) -> float:
    """平均優勢的保守標準誤差（取各點標準誤差的最大值）"""
    return float(curve.std_error().max())
