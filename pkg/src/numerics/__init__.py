"""
Numerics Module
特殊函數、根搜尋、可重現亂數與乘積 Bernoulli 工具
"""

from .special import (
    log_gamma,
    digamma,
    trigamma,
    digamma_inverse,
    log_multivariate_beta,
    binary_kl,
)
from .roots import bisect
from .rng import RngStream, sample_gamma, sample_dirichlet, sample_beta
from .bernoulli import (
    MAX_ENUMERATION_K,
    soft_threshold,
    bit_outcomes,
    product_bernoulli_pmf,
)
from .parallel import ordered_map, sample_blocks

__all__ = [
    "log_gamma",
    "digamma",
    "trigamma",
    "digamma_inverse",
    "log_multivariate_beta",
    "binary_kl",
    "bisect",
    "RngStream",
    "sample_gamma",
    "sample_dirichlet",
    "sample_beta",
    "MAX_ENUMERATION_K",
    "soft_threshold",
    "bit_outcomes",
    "product_bernoulli_pmf",
    "ordered_map",
    "sample_blocks",
]
