"""
Root Finding - 根搜尋

單變數二分法，供 β 下界曲線反解二元 KL 使用。
"""

from typing import Callable, Optional

from errors import BracketingError, DomainError

DEFAULT_TOLERANCE = 1e-10
MAX_ITERATIONS = 200


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_TOLERANCE,
    keep: Optional[str] = None,
) -> float:
    """
    二分法求 f(x) = 0，x ∈ [lo, hi]

    Args:
        f: 連續函數，f(lo) 與 f(hi) 須異號（可為 ±∞）
        lo, hi: 搜尋區間
        tol: 區間寬度收斂門檻
        keep: None 回傳中點；"lo" / "hi" 回傳保留該端點符號的括號端點

    Returns:
        根的近似值，|x − x*| ≤ tol

    Raises:
        BracketingError: 兩端同號
        DomainError: 區間或容差不合法
    """
    if not lo <= hi:
        raise DomainError(f"bisect: empty interval [{lo}, {hi}]")
    if not tol > 0.0:
        raise DomainError(f"bisect: tolerance must be positive, got {tol}")
    if keep not in (None, "lo", "hi"):
        raise DomainError(f"bisect: keep must be None, 'lo' or 'hi', got {keep!r}")

    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketingError(
            f"bisect: f has the same sign at both ends "
            f"(f({lo})={f_lo!r}, f({hi})={f_hi!r})"
        )

    for _ in range(MAX_ITERATIONS):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid

    if keep == "lo":
        return lo
    if keep == "hi":
        return hi
    return 0.5 * (lo + hi)
