"""
Bounds module
Dirichlet KL、Pinsker 型上界、β 下界曲線與決策集收縮係數
"""

from .divergence import (
    DivergencePair,
    dirichlet_kl,
    discrete_kl,
    mode_divergences,
    pinsker_advantage_ub,
    beta_lb_curve,
)
from .decision_set import support_margin, tv_product_bernoulli, delta_factor
from .advantage import (
    AdvantageBounds,
    cv_advantage_ub,
    tlc_advantage_ub,
    ds_advantage_ub,
    channel_advantage_ub,
    advantage_ub,
)

__all__ = [
    "DivergencePair",
    "dirichlet_kl",
    "discrete_kl",
    "mode_divergences",
    "pinsker_advantage_ub",
    "beta_lb_curve",
    "support_margin",
    "tv_product_bernoulli",
    "delta_factor",
    "AdvantageBounds",
    "cv_advantage_ub",
    "tlc_advantage_ub",
    "ds_advantage_ub",
    "channel_advantage_ub",
    "advantage_ub",
]
