"""
Fitting module
信心資料的讀寫、合成與 Dirichlet / Beta 最大概似擬合
"""

from .dataset import (
    DEFAULT_CLAMP,
    ConfidenceDataset,
    ingest_csv,
    format_csv,
    write_csv,
    generate_dataset,
)
from .mle import (
    FitResult,
    dirichlet_log_likelihood,
    moment_match,
    ascent_violations,
    fit_dirichlet,
    fit_beta_tlc,
)

__all__ = [
    "DEFAULT_CLAMP",
    "ConfidenceDataset",
    "ingest_csv",
    "format_csv",
    "write_csv",
    "generate_dataset",
    "FitResult",
    "dirichlet_log_likelihood",
    "moment_match",
    "ascent_violations",
    "fit_dirichlet",
    "fit_beta_tlc",
]
