"""
Advantage Upper Bounds - 攻擊者優勢上界

CV：√(D(f_out‖f_in) + D(f_in‖f_out))，以 Dirichlet KL 計算，並與 digamma 閉式交叉驗證：
    Δ(1−ϵa)/ϵe · (ψ(γin_0) − ψ(γout_0) + ψ(γout_k) − ψ(γin_k))
近似式（ψ(x) ≈ ln x − 1/(2x)）：
    Δ(1−ϵa)/ϵe · ln((1+Δ)ϵa / ((1+Δ)ϵa − Δ))
    + Δ²(1−ϵa)²(K−1) / (2ϵa((1+Δ)ϵa − Δ))
    + Δ² / (2(1+Δ))
TLC：同上但非真實標籤質量合併為一個分量（(K−1) → 1）。
DS：δ_{T,q} × CV。
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
from scipy import special

from errors import ConsistencyError
from numerics import digamma
from uncertainty import DirichletPair, UncertaintyProfile, profile_to_pair
from lira.types import DisclosureKind, DisclosureMode
from bounds.divergence import DivergencePair, mode_divergences, pinsker_advantage_ub
from bounds.decision_set import delta_factor

logger = logging.getLogger(__name__)

# 兩條計算路徑的一致性容差
ROUTE_REL_TOL = 1e-9
ROUTE_ABS_TOL = 1e-12
CANCELLATION_ULPS = 64


@dataclass(frozen=True)
class AdvantageBounds:
    """
    優勢上界（已截斷至 [0, 1]）

    Attributes:
        exact: 精確上界
        approx: 漸近近似上界
        mode: 揭露模式
        raw_exact / raw_approx: 截斷前的 Pinsker 值
        factor: 乘上的收縮係數（DS 為 δ_{T,q}，其他為 1）
    """
    exact: float
    approx: float
    mode: DisclosureMode
    raw_exact: float
    raw_approx: float
    factor: float = 1.0

    @classmethod
    def from_raw(cls, raw_exact: float, raw_approx: float, mode: DisclosureMode,
                 factor: float = 1.0) -> "AdvantageBounds":
        return cls(
            exact=float(np.clip(raw_exact, 0.0, 1.0)),
            approx=float(np.clip(raw_approx, 0.0, 1.0)),
            mode=mode,
            raw_exact=float(raw_exact),
            raw_approx=float(raw_approx),
            factor=float(factor),
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "mode": self.mode.label,
            "exact": self.exact,
            "approx": self.approx,
            "raw_exact": self.raw_exact,
            "raw_approx": self.raw_approx,
            "factor": self.factor,
        }


def _digamma_form(profile: UncertaintyProfile, others: int) -> float:
    """對稱 KL 的 digamma 閉式；others = K−1（CV）或 1（TLC）"""
    delta, eps_a, eps_e = profile.delta, profile.eps_a, profile.eps_e
    if delta == 0.0:
        return 0.0
    a_out0 = (1.0 - eps_a) / eps_e
    a_in0 = (1.0 + delta) * (1.0 - eps_a) / eps_e
    a_outk = eps_a / (others * eps_e)
    a_ink = (eps_a * (1.0 + delta) - delta) / (others * eps_e)
    psi = digamma(np.array([a_in0, a_out0, a_outk, a_ink]))
    return float(delta * (1.0 - eps_a) / eps_e * (psi[0] - psi[1] + psi[2] - psi[3]))


def _approx_form(profile: UncertaintyProfile, others: int) -> float:
    """ψ(x) ≈ ln x − 1/(2x) 代入後的三項和"""
    delta, eps_a, eps_e = profile.delta, profile.eps_a, profile.eps_e
    if delta == 0.0:
        return 0.0
    shifted = (1.0 + delta) * eps_a - delta
    log_term = delta * (1.0 - eps_a) / eps_e * np.log((1.0 + delta) * eps_a / shifted)
    class_term = delta ** 2 * (1.0 - eps_a) ** 2 * others / (2.0 * eps_a * shifted)
    calibration_term = delta ** 2 / (2.0 * (1.0 + delta))
    return float(log_term + class_term + calibration_term)


def _cancellation_scale(pair: DirichletPair) -> float:
    """ln B 差分的量級；大濃度時 KL 路徑的絕對誤差隨之成長"""
    scale = 0.0
    for gamma in (pair.gamma_out, pair.gamma_in):
        scale += float(np.abs(special.gammaln(gamma)).sum()) + abs(float(special.gammaln(gamma.sum())))
    return scale


def _checked_sym_kl(div: DivergencePair, closed_form: float, pair: DirichletPair, label: str) -> float:
    sym_kl = div.total
    tolerance = (
        ROUTE_REL_TOL * max(abs(sym_kl), abs(closed_form))
        + ROUTE_ABS_TOL
        + CANCELLATION_ULPS * np.finfo(np.float64).eps * _cancellation_scale(pair)
    )
    if abs(sym_kl - closed_form) > tolerance:
        raise ConsistencyError(
            f"{label}: symmetrized Dirichlet KL {sym_kl!r} disagrees with digamma form {closed_form!r}"
        )
    return sym_kl


def cv_advantage_ub(profile: UncertaintyProfile) -> AdvantageBounds:
    """CV 揭露的優勢上界"""
    mode = DisclosureMode.cv()
    pair = profile_to_pair(profile)
    div = mode_divergences(pair, mode)
    _checked_sym_kl(div, _digamma_form(profile, profile.k - 1), pair, "CV bound")
    raw_exact = pinsker_advantage_ub(div)
    raw_approx = float(np.sqrt(max(_approx_form(profile, profile.k - 1), 0.0)))
    return AdvantageBounds.from_raw(raw_exact, raw_approx, mode)


def tlc_advantage_ub(profile: UncertaintyProfile) -> AdvantageBounds:
    """TLC 揭露的優勢上界（真實標籤 Beta 邊際）"""
    mode = DisclosureMode.tlc()
    pair = profile_to_pair(profile)
    div = mode_divergences(pair, mode)
    _checked_sym_kl(div, _digamma_form(profile, 1), pair.aggregated(), "TLC bound")
    raw_exact = pinsker_advantage_ub(div)
    raw_approx = float(np.sqrt(max(_approx_form(profile, 1), 0.0)))
    return AdvantageBounds.from_raw(raw_exact, raw_approx, mode)


def ds_advantage_ub(
    profile: UncertaintyProfile,
    temperature: float,
    q: float,
    margin: Optional[float] = None,
) -> AdvantageBounds:
    """DS 揭露的優勢上界 δ_{T,q} × CV"""
    mode = DisclosureMode.ds(q, temperature)
    cv = cv_advantage_ub(profile)
    factor = delta_factor(float(temperature), float(q), profile.k, margin)
    return AdvantageBounds.from_raw(factor * cv.raw_exact, factor * cv.raw_approx, mode, factor)


def channel_advantage_ub(div: DivergencePair, mode: DisclosureMode) -> AdvantageBounds:
    """直接由通道輸出分佈的 KL 得到的上界（沒有近似式，approx = exact）"""
    raw = pinsker_advantage_ub(div)
    return AdvantageBounds.from_raw(raw, raw, mode)


def advantage_ub(profile: UncertaintyProfile, mode: DisclosureMode,
                 margin: Optional[float] = None) -> AdvantageBounds:
    """依揭露模式分派"""
    if mode.kind is DisclosureKind.CV:
        return cv_advantage_ub(profile)
    if mode.kind is DisclosureKind.TLC:
        return tlc_advantage_ub(profile)
    return ds_advantage_ub(profile, mode.temperature, mode.q, margin)
