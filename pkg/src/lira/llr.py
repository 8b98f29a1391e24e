"""
Log-likelihood ratios - LiRA 檢定統計量

LLR = ln f_out(p) − ln f_in(p)，值越小越傾向「在訓練集內」。
"""

import logging
from typing import Tuple

import numpy as np

from errors import DomainError
from numerics import log_multivariate_beta
from uncertainty import DirichletPair

logger = logging.getLogger(__name__)

# 邊界樣本 log 前的截斷下限
LOG_FLOOR = 1e-300


def _clamped_log(values: np.ndarray) -> Tuple[np.ndarray, int]:
    clamped = int(np.count_nonzero(values < LOG_FLOOR))
    return np.log(np.maximum(values, LOG_FLOOR)), clamped


def llr_cv_batch(samples: np.ndarray, pair: DirichletPair) -> Tuple[np.ndarray, int]:
    """
    信心向量的 LLR（批次）

    ln B(γin) − ln B(γout) + Σ_k (γout_k − γin_k) ln p_k

    Args:
        samples: (n, K) 機率向量
        pair: Dirichlet 參數對

    Returns:
        (llr, clamped)：clamped 為被截斷的分量數
    """
    p = np.asarray(samples, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != pair.k:
        raise DomainError(f"llr_cv: expected (n, {pair.k}) samples, got {p.shape}")
    if np.any(p < 0.0):
        raise DomainError("llr_cv: negative probabilities")
    log_p, clamped = _clamped_log(p)
    offset = log_multivariate_beta(pair.gamma_in) - log_multivariate_beta(pair.gamma_out)
    return offset + log_p @ (pair.gamma_out - pair.gamma_in), clamped


def llr_tlc_batch(p0: np.ndarray, pair: DirichletPair) -> Tuple[np.ndarray, int]:
    """
    真實標籤信心的 LLR（Beta 邊際，指數為 γ₀−1 與 γ̄₀−1）
    """
    x = np.asarray(p0, dtype=np.float64).reshape(-1)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("llr_tlc: p0 must lie in [0, 1]")
    marginal = pair.aggregated()
    return llr_cv_batch(np.column_stack([x, 1.0 - x]), marginal)


def llr_cv(p: np.ndarray, pair: DirichletPair) -> float:
    """單一信心向量的 LLR；零分量截斷於 1e-300 並記錄警告"""
    value, clamped = llr_cv_batch(np.asarray(p, dtype=np.float64)[None, :], pair)
    if clamped:
        logger.warning(f"[LiRA] llr_cv clamped {clamped} zero component(s) at {LOG_FLOOR:g}")
    return float(value[0])


def llr_tlc(p0: float, pair: DirichletPair) -> float:
    """單一真實標籤信心的 LLR"""
    value, clamped = llr_tlc_batch(np.array([p0]), pair)
    if clamped:
        logger.warning(f"[LiRA] llr_tlc clamped endpoint p0={p0!r} at {LOG_FLOOR:g}")
    return float(value[0])
