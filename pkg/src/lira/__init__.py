"""
LiRA module
似然比成員推論攻擊的 Monte Carlo 模擬：trade-off 曲線、優勢與決策集統計
"""

from .types import (
    DisclosureKind,
    DisclosureMode,
    TradeoffCurve,
    DsPmfPair,
    default_alphas,
    validate_alphas,
)
from .llr import llr_cv, llr_tlc, llr_cv_batch, llr_tlc_batch
from .channel import (
    DecisionSetChannel,
    init_taichi,
    ds_pmfs,
    expected_set_size,
    set_size_table,
)
from .tradeoff import (
    DEFAULT_SAMPLES,
    HIGH_TNR,
    empirical_betas,
    discrete_roc_betas,
    simulate_tradeoff,
    avg_advantage,
    advantage_at,
    advantage_std_error,
)

__all__ = [
    "DisclosureKind",
    "DisclosureMode",
    "TradeoffCurve",
    "DsPmfPair",
    "default_alphas",
    "validate_alphas",
    "llr_cv",
    "llr_tlc",
    "llr_cv_batch",
    "llr_tlc_batch",
    "DecisionSetChannel",
    "init_taichi",
    "ds_pmfs",
    "expected_set_size",
    "set_size_table",
    "DEFAULT_SAMPLES",
    "HIGH_TNR",
    "empirical_betas",
    "discrete_roc_betas",
    "simulate_tradeoff",
    "avg_advantage",
    "advantage_at",
    "advantage_std_error",
]
