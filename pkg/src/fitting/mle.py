"""
Dirichlet Maximum Likelihood - 固定點 MLE

迭代：γ_k ← ψ⁻¹(ψ(Σγ) + mean ln p_k)
初始化：以第一個非退化分量的平均與變異數決定 Σγ，再令 γ_k = mean_k · Σγ
收斂：駐點殘差 max_k |ψ(γ_k) − ψ(Σγ) − mean ln p_k| ≤ tol
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from errors import DomainError
from numerics import digamma, digamma_inverse, log_multivariate_beta
from fitting.dataset import ConfidenceDataset

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_ITER = 1000
# 對數似然單步允許的下降（浮點誤差）
ASCENT_SLACK = 1e-9


@dataclass
class FitResult:
    """
    擬合結果

    Attributes:
        gamma_hat: 估計參數（嚴格為正）
        log_likelihood: 最終對數似然
        iterations: 固定點迭代次數
        converged: 駐點殘差是否達到容差
        tolerance_achieved: 最終駐點殘差
        tolerance: 設定的容差
        n: 樣本數
        log_likelihood_trace: 每次迭代後的對數似然（含初始值）
        warnings: 退化資料等警告
    """
    gamma_hat: np.ndarray
    log_likelihood: float
    iterations: int
    converged: bool
    tolerance_achieved: float
    tolerance: float
    n: int
    log_likelihood_trace: List[float] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def stationarity_residual(self) -> float:
        return self.tolerance_achieved

    @property
    def mean(self) -> np.ndarray:
        return self.gamma_hat / self.gamma_hat.sum()

    @property
    def total(self) -> float:
        return float(self.gamma_hat.sum())

    def to_dict(self) -> Dict[str, object]:
        return {
            "gamma_hat": self.gamma_hat.tolist(),
            "log_likelihood": self.log_likelihood,
            "iterations": self.iterations,
            "converged": self.converged,
            "tolerance_achieved": self.tolerance_achieved,
            "n": self.n,
            "warnings": list(self.warnings),
        }


def dirichlet_log_likelihood(gamma: np.ndarray, sum_log_p: np.ndarray, n: int) -> float:
    """n·(−ln B(γ)) + Σ_k (γ_k − 1)·Σ_rows ln p_k"""
    return float(-n * log_multivariate_beta(gamma) + np.dot(gamma - 1.0, sum_log_p))


def moment_match(rows: np.ndarray) -> Optional[np.ndarray]:
    """
    矩匹配初始值：Σγ = m(1−m)/Var − 1（第一個變異數為正的分量）

    Returns:
        初始參數；所有分量皆退化時回傳 None
    """
    means = rows.mean(axis=0)
    variances = rows.var(axis=0)
    for m, v in zip(means, variances):
        if v > 0.0 and 0.0 < m < 1.0:
            total = m * (1.0 - m) / v - 1.0
            if total > 0.0:
                return means * total
    return None


def _stationarity_residual(gamma: np.ndarray, mean_log_p: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(digamma(gamma)) - digamma(float(gamma.sum())) - mean_log_p)))


def ascent_violations(trace: List[float]) -> List[str]:
    """對數似然軌跡中超出浮點誤差的下降（每次一則訊息）"""
    messages = []
    for iteration in range(1, len(trace)):
        previous, current = trace[iteration - 1], trace[iteration]
        if current < previous - ASCENT_SLACK * max(1.0, abs(previous)):
            messages.append(
                f"log-likelihood decreased at iteration {iteration} ({previous:.12g} -> {current:.12g})"
            )
    return messages


def _fixed_point(
    rows: np.ndarray,
    tol: float,
    max_iter: int,
    component: str,
) -> FitResult:
    n, k = rows.shape
    log_p = np.log(rows)
    sum_log_p = log_p.sum(axis=0)
    mean_log_p = sum_log_p / n

    warnings: List[str] = []
    constant = np.flatnonzero(np.ptp(rows, axis=0) == 0.0)
    for j in constant:
        warnings.append(f"{component} {j} is constant across rows")

    gamma = moment_match(rows)
    if gamma is None or len(constant) == k:
        # 完全退化：似然無上界，回傳平均方向的正參數
        fallback = rows.mean(axis=0)
        logger.warning(f"[DirichletFit] degenerate data ({len(constant)}/{k} constant components)")
        return FitResult(
            gamma_hat=np.maximum(fallback, np.finfo(float).tiny),
            log_likelihood=float("nan"),
            iterations=0,
            converged=False,
            tolerance_achieved=float("inf"),
            tolerance=tol,
            n=n,
            warnings=warnings + ["likelihood is unbounded for degenerate data"],
        )

    trace = [dirichlet_log_likelihood(gamma, sum_log_p, n)]
    residual = _stationarity_residual(gamma, mean_log_p)
    iterations = 0
    converged = residual <= tol

    while not converged and iterations < max_iter:
        updated = np.asarray(digamma_inverse(digamma(float(gamma.sum())) + mean_log_p))
        if not np.all(np.isfinite(updated)) or np.any(updated <= 0.0):
            warnings.append(f"fixed point left the positive orthant at iteration {iterations + 1}")
            break
        gamma = updated
        iterations += 1
        trace.append(dirichlet_log_likelihood(gamma, sum_log_p, n))
        residual = _stationarity_residual(gamma, mean_log_p)
        converged = residual <= tol

    descents = ascent_violations(trace)
    if descents:
        logger.warning(f"[DirichletFit] log-likelihood decreased: {'; '.join(descents)}")
        warnings.extend(descents)

    if converged:
        logger.info(f"[DirichletFit] converged in {iterations} iterations (residual={residual:.3g})")
    else:
        logger.warning(f"[DirichletFit] not converged after {iterations} iterations (residual={residual:.3g})")

    return FitResult(
        gamma_hat=gamma,
        log_likelihood=trace[-1],
        iterations=iterations,
        converged=converged,
        tolerance_achieved=residual,
        tolerance=tol,
        n=n,
        log_likelihood_trace=trace,
        warnings=warnings,
    )


def _check_fit_input(data: ConfidenceDataset, tol: float, max_iter: int) -> None:
    if data.n < data.k + 1:
        raise DomainError(f"fitting needs at least k+1={data.k + 1} rows, got {data.n}")
    if np.any(data.rows <= 0.0):
        raise DomainError("fitting needs data strictly inside the simplex (clamp zero components)")
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter}")


def fit_dirichlet(
    data: ConfidenceDataset,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> FitResult:
    """
    Dirichlet MLE

    不收斂時回傳 converged=False（不拋例外）

    Raises:
        DomainError: 列數 < k+1 或資料含 0
    """
    _check_fit_input(data, tol, max_iter)
    return _fixed_point(data.rows, tol, max_iter, "component")


def fit_beta_tlc(
    data: ConfidenceDataset,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> FitResult:
    """
    真實標籤信心的 Beta MLE：每列化為 (p₀, 1−p₀) 後套用同一固定點

    Returns:
        gamma_hat = (γ₀, γ̄₀)

    Raises:
        DomainError: 同 fit_dirichlet
    """
    _check_fit_input(data, tol, max_iter)
    p0 = data.rows[:, 0]
    reduced = np.column_stack([p0, data.rows[:, 1:].sum(axis=1)])
    result = _fixed_point(reduced, tol, max_iter, "column")
    if np.ptp(p0) == 0.0:
        result.converged = False
        if not any("constant" in w for w in result.warnings):
            result.warnings.append("true-label confidence is constant across rows")
    return result
