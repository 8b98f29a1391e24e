"""
Product-Bernoulli Helpers - 乘積 Bernoulli 工具

決策集揭露把每個類別 k 獨立以機率 σ_T(p_k − q) 納入集合，
結果 b ∈ {0,1}^K 以整數索引 Σ_j b_j 2^j 表示。
"""

import numpy as np
from scipy import special

from errors import DomainError

# 精確列舉的上限：2^16 個結果
MAX_ENUMERATION_K = 16


def soft_threshold(x, temperature: float):
    """
    σ_T(x) = 1 / (1 + exp(−x/T))

    T = 0 為硬門檻 1[x ≥ 0]；T = ∞ 恆為 1/2。
    """
    if not temperature >= 0.0:
        raise DomainError(f"temperature must be >= 0, got {temperature}")
    arr = np.asarray(x, dtype=np.float64)
    if temperature == 0.0:
        value = (arr >= 0.0).astype(np.float64)
    elif np.isinf(temperature):
        value = np.full_like(arr, 0.5)
    else:
        value = special.expit(arr / temperature)
    if np.ndim(x) == 0:
        return float(value)
    return value


def bit_outcomes(k: int) -> np.ndarray:
    """回傳 (2^k, k) 的 0/1 矩陣，第 b 列為整數 b 的二進位展開（低位在前）"""
    if k > MAX_ENUMERATION_K:
        raise DomainError(f"bit_outcomes: k={k} exceeds {MAX_ENUMERATION_K}")
    index = np.arange(2 ** k, dtype=np.int64)
    return ((index[:, None] >> np.arange(k)) & 1).astype(np.uint8)


def product_bernoulli_pmf(u: np.ndarray) -> np.ndarray:
    """
    乘積 Bernoulli 分佈在全部 2^m 個結果上的機率

    Args:
        u: (..., m) 每個座標為 1 的機率

    Returns:
        (..., 2^m) 機率，索引 b = Σ_j b_j 2^j
    """
    probs = np.asarray(u, dtype=np.float64)
    pmf = np.ones(probs.shape[:-1] + (1,), dtype=np.float64)
    for j in range(probs.shape[-1]):
        uj = probs[..., j:j + 1]
        pmf = np.concatenate([pmf * (1.0 - uj), pmf * uj], axis=-1)
    return pmf
