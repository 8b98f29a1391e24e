"""
Special Functions - 特殊函數

提供所有 bound 與 fitting 共用的數值核心：
    • log_gamma: ln Γ(x)（scipy.special.gammaln）
    • digamma: ψ(x)，向上遞推至 x ≥ 6 後使用 8 項漸近級數
    • digamma_inverse: ψ⁻¹(y)，Minka 初始化 + Newton 修正
    • log_multivariate_beta: ln B(γ)
    • binary_kl: 二元 KL 散度 d(a‖b)（nats）

所有函數接受純量或 numpy 陣列，純量輸入回傳 float。
"""

from typing import Union

import numpy as np
from scipy import special

from errors import DomainError

ArrayLike = Union[float, np.ndarray]

EULER_MASCHERONI = 0.57721566490153286061

# ψ 的遞推下限與漸近級數係數 B_2n / (2n)，n = 1..8
DIGAMMA_RECURRENCE_FLOOR = 6.0
_ASYMPTOTIC_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)

# digamma_inverse 的 Newton 設定
INVERSE_TOLERANCE = 1e-10
INVERSE_MAX_NEWTON = 50


def _positive_array(x: ArrayLike, name: str) -> np.ndarray:
    """轉為 float 陣列並檢查 x > 0 且有限"""
    arr = np.asarray(x, dtype=np.float64)
    if arr.size == 0:
        raise DomainError(f"{name}: empty input")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name}: argument must be finite")
    if np.any(arr <= 0.0):
        raise DomainError(f"{name}: argument must be positive, got min={arr.min()!r}")
    return arr


def _like_input(value: np.ndarray, x: ArrayLike) -> ArrayLike:
    """純量輸入回傳 float，陣列輸入回傳陣列"""
    if np.ndim(x) == 0:
        return float(value)
    return value


def log_gamma(x: ArrayLike) -> ArrayLike:
    """
    ln Γ(x)

    Args:
        x: 正實數（純量或陣列）

    Returns:
        ln Γ(x)

    Raises:
        DomainError: x ≤ 0 或非有限值
    """
    arr = _positive_array(x, "log_gamma")
    return _like_input(special.gammaln(arr), x)


def digamma(x: ArrayLike) -> ArrayLike:
    """
    ψ(x) = Γ'(x)/Γ(x)

    演算法：
        1. 遞推 ψ(x) = ψ(x+1) − 1/x 直到 x ≥ 6
        2. ψ(x) ≈ ln x − 1/(2x) − Σ_{n=1}^{8} B_2n / (2n x^2n)

    Raises:
        DomainError: x ≤ 0 或非有限值
    """
    z = _positive_array(x, "digamma").copy()
    value = np.zeros_like(z)

    small = z < DIGAMMA_RECURRENCE_FLOOR
    while np.any(small):
        value[small] -= 1.0 / z[small]
        z[small] += 1.0
        small = z < DIGAMMA_RECURRENCE_FLOOR

    inv_z2 = 1.0 / (z * z)
    series = np.zeros_like(z)
    for coeff in reversed(_ASYMPTOTIC_COEFFS):
        series = inv_z2 * (coeff + series)

    value += np.log(z) - 0.5 / z - series
    return _like_input(value, x)


def trigamma(x: ArrayLike) -> ArrayLike:
    """ψ'(x)，Newton 步驟使用"""
    arr = _positive_array(x, "trigamma")
    return _like_input(special.polygamma(1, arr), x)


def digamma_inverse(y: ArrayLike) -> ArrayLike:
    """
    ψ⁻¹(y)：求 x > 0 使 ψ(x) = y

    初始值（Minka）：
        x0 = exp(y) + 1/2        若 y ≥ −2.22
        x0 = −1/(y + γ_EM)       否則
    之後以 Newton 步驟修正至 |ψ(x) − y| ≤ 1e-10。

    Raises:
        DomainError: y 非有限值，或解超出浮點範圍
    """
    target = np.asarray(y, dtype=np.float64)
    if not np.all(np.isfinite(target)):
        raise DomainError("digamma_inverse: argument must be finite")

    with np.errstate(over="ignore"):
        x = np.where(
            target >= -2.22,
            np.exp(target) + 0.5,
            -1.0 / (target + EULER_MASCHERONI),
        )
    if not np.all(np.isfinite(x)):
        raise DomainError("digamma_inverse: solution overflows float64")

    for _ in range(INVERSE_MAX_NEWTON):
        err = np.asarray(digamma(x)) - target
        if np.all(np.abs(err) <= INVERSE_TOLERANCE):
            break
        step = err / np.asarray(trigamma(x))
        x_new = x - step
        # Newton 越過 0 時改為減半
        x = np.where(x_new > 0.0, x_new, 0.5 * x)

    # 最後一步把殘差壓到浮點精度
    x_polish = x - (np.asarray(digamma(x)) - target) / np.asarray(trigamma(x))
    x = np.where(x_polish > 0.0, x_polish, x)
    return _like_input(x, y)


def log_multivariate_beta(gamma: np.ndarray) -> ArrayLike:
    """
    ln B(γ) = Σ_k ln Γ(γ_k) − ln Γ(Σ_k γ_k)

    Args:
        gamma: 最後一維為參數向量（長度 ≥ 2）

    Raises:
        DomainError: 空向量、長度 < 2 或含非正分量
    """
    arr = np.asarray(gamma, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] < 2:
        raise DomainError("log_multivariate_beta: need a vector of length >= 2")
    arr = _positive_array(arr, "log_multivariate_beta")
    value = special.gammaln(arr).sum(axis=-1) - special.gammaln(arr.sum(axis=-1))
    if arr.ndim == 1:
        return float(value)
    return value


def binary_kl(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """
    二元 KL 散度 d(a‖b) = a ln(a/b) + (1−a) ln((1−a)/(1−b))

    約定 0·ln 0 = 0；當 b ∈ {0,1} 與 a 不一致時回傳 +∞。

    Raises:
        DomainError: 參數不在 [0, 1]
    """
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    for name, arr in (("a", a_arr), ("b", b_arr)):
        if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
            raise DomainError(f"binary_kl: {name} must lie in [0, 1]")
    value = special.rel_entr(a_arr, b_arr) + special.rel_entr(1.0 - a_arr, 1.0 - b_arr)
    if np.ndim(a) == 0 and np.ndim(b) == 0:
        return float(value)
    return value
