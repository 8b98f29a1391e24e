"""
Divergences - KL 散度與 Pinsker 型下界

    • dirichlet_kl: 兩個 Dirichlet 分佈的 KL（閉式）
    • discrete_kl: 有限分佈的 KL
    • mode_divergences: 各揭露通道看到的雙向 KL
    • pinsker_advantage_ub: √(D_out‖in + D_in‖out)
    • beta_lb_curve: 由兩個二元 KL 約束反解的 β 下界曲線
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from errors import DomainError
from numerics import binary_kl, bisect, digamma, log_multivariate_beta
from uncertainty import DirichletPair
from lira.types import (
    DisclosureKind,
    DisclosureMode,
    DsPmfPair,
    TradeoffCurve,
    validate_alphas,
)

logger = logging.getLogger(__name__)

BETA_LB_TOLERANCE = 1e-10


@dataclass(frozen=True)
class DivergencePair:
    """雙向 KL 散度（nats）"""
    d_out_in: float
    d_in_out: float

    def __post_init__(self):
        for name in ("d_out_in", "d_in_out"):
            value = float(getattr(self, name))
            if np.isnan(value) or value < 0.0:
                # 浮點誤差造成的極小負值視為 0
                if not np.isnan(value) and value > -1e-12:
                    value = 0.0
                else:
                    raise DomainError(f"{name} must be >= 0, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def total(self) -> float:
        return self.d_out_in + self.d_in_out


def dirichlet_kl(gamma_p: np.ndarray, gamma_q: np.ndarray) -> float:
    """
    KL(Dir(γp) ‖ Dir(γq)) = ln B(γq) − ln B(γp) + Σ_k (γp_k − γq_k)(ψ(γp_k) − ψ(Σγp))

    Raises:
        DomainError: 長度不同或含非正分量
    """
    p = np.asarray(gamma_p, dtype=np.float64)
    q = np.asarray(gamma_q, dtype=np.float64)
    if p.ndim != 1 or p.shape != q.shape:
        raise DomainError(f"dirichlet_kl: shapes differ ({p.shape} vs {q.shape})")
    if np.array_equal(p, q):
        # 驗證分量仍然要做
        log_multivariate_beta(p)
        return 0.0
    value = (
        log_multivariate_beta(q)
        - log_multivariate_beta(p)
        + float(np.dot(p - q, np.asarray(digamma(p)) - digamma(float(p.sum()))))
    )
    return max(value, 0.0)


def discrete_kl(pmf_p: np.ndarray, pmf_q: np.ndarray) -> float:
    """有限分佈的 KL(p‖q)；p 不絕對連續於 q 時回傳 +∞"""
    p = np.asarray(pmf_p, dtype=np.float64)
    q = np.asarray(pmf_q, dtype=np.float64)
    if p.shape != q.shape:
        raise DomainError(f"discrete_kl: shapes differ ({p.shape} vs {q.shape})")
    if np.any(p < 0.0) or np.any(q < 0.0):
        raise DomainError("discrete_kl: probabilities must be non-negative")
    return float(max(special.rel_entr(p, q).sum(), 0.0))


def mode_divergences(
    pair: DirichletPair,
    mode: DisclosureMode,
    pmfs: Optional[DsPmfPair] = None,
) -> DivergencePair:
    """
    某一揭露通道下 out/in 觀測分佈的雙向 KL

    Args:
        pair: Dirichlet 參數對
        mode: 揭露模式
        pmfs: DS 模式需要的結果分佈（由 lira.ds_pmfs 產生）
    """
    if mode.kind is DisclosureKind.CV:
        return DivergencePair(
            dirichlet_kl(pair.gamma_out, pair.gamma_in),
            dirichlet_kl(pair.gamma_in, pair.gamma_out),
        )
    if mode.kind is DisclosureKind.TLC:
        marginal = pair.aggregated()
        return DivergencePair(
            dirichlet_kl(marginal.gamma_out, marginal.gamma_in),
            dirichlet_kl(marginal.gamma_in, marginal.gamma_out),
        )
    if pmfs is None:
        raise DomainError("DS divergences need the outcome pmfs (see lira.ds_pmfs)")
    return DivergencePair(
        discrete_kl(pmfs.pmf_out, pmfs.pmf_in),
        discrete_kl(pmfs.pmf_in, pmfs.pmf_out),
    )


def pinsker_advantage_ub(div: DivergencePair) -> float:
    """√(D_out‖in + D_in‖out)，任一方向為 ∞ 時回傳 ∞"""
    total = div.total
    if not np.isfinite(total):
        return float("inf")
    return float(np.sqrt(total))


def _beta_lb_point(alpha: float, div: DivergencePair) -> float:
    """單一 α 的 β_lb = max(β₁, β₂)，截斷至 [0, α]"""
    # β₁：d(α‖β₁) = D_out‖in，β₁ ≤ α
    if div.d_out_in == 0.0:
        beta_1 = alpha
    elif not np.isfinite(div.d_out_in):
        beta_1 = 0.0
    else:
        beta_1 = bisect(
            lambda b: binary_kl(alpha, b) - div.d_out_in,
            0.0, alpha, tol=BETA_LB_TOLERANCE, keep="hi",
        )

    # β₂：d(β₂‖α) = D_in‖out，β₂ ≤ α；d(0‖α) 已在預算內時 β₂ = 0
    if div.d_in_out == 0.0:
        beta_2 = alpha
    elif not np.isfinite(div.d_in_out) or binary_kl(0.0, alpha) <= div.d_in_out:
        beta_2 = 0.0
    else:
        beta_2 = bisect(
            lambda b: binary_kl(b, alpha) - div.d_in_out,
            0.0, alpha, tol=BETA_LB_TOLERANCE, keep="hi",
        )

    return float(np.clip(max(beta_1, beta_2), 0.0, alpha))


def beta_lb_curve(
    div: DivergencePair,
    alphas,
    mode: Optional[DisclosureMode] = None,
) -> TradeoffCurve:
    """
    β 下界曲線：任何可達的 (α, β) 都滿足
        d(α‖β) ≤ D_out‖in  且  d(β‖α) ≤ D_in‖out

    Args:
        div: 觀測通道的雙向 KL
        alphas: 嚴格位於 (0,1) 的遞增網格
        mode: 標記用的揭露模式

    Raises:
        DomainError: α 網格含 0 或 1
    """
    grid = validate_alphas(alphas)
    if div.d_out_in == 0.0 and div.d_in_out == 0.0:
        return TradeoffCurve(alphas=grid, betas=grid.copy(), mode=mode)

    betas = np.array([_beta_lb_point(float(a), div) for a in grid])
    logger.debug(
        f"[BetaLowerBound] D_out_in={div.d_out_in:.6g} D_in_out={div.d_in_out:.6g} "
        f"points={grid.shape[0]}"
    )
    return TradeoffCurve(alphas=grid, betas=betas, mode=mode)
