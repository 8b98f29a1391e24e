"""
CLI Commands - 各子命令的計算

每個 cmd_* 回傳 Table（gen 回傳 CSV 文字），由 cli.main 負責輸出與錯誤處理。
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import LabError, ValidationError
from numerics import RngStream, ordered_map
from uncertainty import (
    fitted_pair,
    infer_profile,
    pair_means,
    pair_variances,
    profile_to_pair,
)
from bounds import (
    AdvantageBounds,
    advantage_ub,
    beta_lb_curve,
    channel_advantage_ub,
    delta_factor,
    mode_divergences,
)
from lira import (
    HIGH_TNR,
    DisclosureKind,
    DisclosureMode,
    TradeoffCurve,
    advantage_at,
    advantage_std_error,
    avg_advantage,
    ds_pmfs,
    set_size_table,
    simulate_tradeoff,
)
from fitting import (
    DEFAULT_CLAMP,
    FitResult,
    fit_beta_tlc,
    fit_dirichlet,
    format_csv,
    generate_dataset,
    ingest_csv,
)
from cli.config import RunConfig, SweepSpec
from cli.output import Table

logger = logging.getLogger(__name__)

# 每種揭露模式固定的串流編號，模式清單順序不影響結果
MODE_STREAMS = {DisclosureKind.CV: 0, DisclosureKind.TLC: 1, DisclosureKind.DS: 2}
HYPOTHESIS_STREAMS = {"out": 0, "in": 1}


def _mode_stream(seed: int, mode: DisclosureMode, *prefix: int) -> RngStream:
    return RngStream(seed).derive(*prefix, MODE_STREAMS[mode.kind])


def _safe_advantage_at(curve: TradeoffCurve, alpha: float = HIGH_TNR) -> Optional[float]:
    if curve.alphas[0] <= alpha <= curve.alphas[-1]:
        return advantage_at(curve, alpha)
    return None


# ============================================================================
# params / bounds
# ============================================================================

def cmd_params(config: RunConfig) -> Table:
    """Dirichlet 參數、平均與變異數"""
    pair = profile_to_pair(config.profile)
    means = pair_means(pair)
    variances = pair_variances(pair)
    table = Table(columns=["hypothesis", "component", "gamma", "mean", "variance"])
    for index, hypothesis in enumerate(("out", "in")):
        gamma = pair.hypothesis(hypothesis)
        for j in range(pair.k):
            table.add(hypothesis, j, float(gamma[j]), float(means[index][j]), float(variances[index][j]))
    sum_out, sum_in = pair.sums
    table.summary.append({"sum_out": sum_out, "sum_in": sum_in, "p_star_0": config.profile.p_star_0})
    return table


def cmd_bounds(config: RunConfig, with_beta_lb: bool = False) -> Table:
    """
    各揭露模式的優勢上界；with_beta_lb 時改為輸出 β 下界曲線

    DS 的 β 下界需要結果分佈，使用 n_mc 次抽樣。
    """
    profile = config.profile
    if not with_beta_lb:
        table = Table(columns=["mode", "q", "temperature", "factor", "bound_exact", "bound_approx",
                               "raw_exact", "raw_approx"])
        for mode in config.modes:
            bounds = advantage_ub(profile, mode, config.margin)
            table.add(mode.kind.value, mode.q, mode.temperature, bounds.factor, bounds.exact,
                      bounds.approx, bounds.raw_exact, bounds.raw_approx)
        return table

    pair = profile_to_pair(profile)
    alphas = config.alphas()
    table = Table(columns=["mode", "alpha", "beta_lb"])
    for mode in config.modes:
        pmfs = None
        if mode.kind is DisclosureKind.DS:
            pmfs = ds_pmfs(pair, mode, config.n_mc, _mode_stream(config.seed, mode), config.threads)
        div = mode_divergences(pair, mode, pmfs)
        curve = beta_lb_curve(div, alphas, mode)
        for alpha, beta in curve.points:
            table.add(mode.kind.value, alpha, beta)
        table.summary.append({"mode": mode.label, "d_out_in": div.d_out_in, "d_in_out": div.d_in_out})
    return table


# ============================================================================
# simulate
# ============================================================================

def _simulate_mode(config: RunConfig, mode: DisclosureMode, rng: RngStream, threads: int):
    """單一模式：模擬曲線、β 下界與上界"""
    pair = profile_to_pair(config.profile)
    alphas = config.alphas()
    pmfs = None
    if mode.kind is DisclosureKind.DS:
        pmfs = ds_pmfs(pair, mode, config.n_mc, rng, threads=threads)
    curve = simulate_tradeoff(pair, mode, config.n_samples, alphas, rng,
                              n_mc=config.n_mc, threads=threads, pmfs=pmfs)
    div = mode_divergences(pair, mode, pmfs)
    lower = beta_lb_curve(div, alphas, mode)
    bounds = advantage_ub(config.profile, mode, config.margin)
    channel: Optional[AdvantageBounds] = channel_advantage_ub(div, mode) if pmfs is not None else None
    return curve, lower, bounds, channel


def cmd_simulate(config: RunConfig) -> Table:
    """模擬每個揭露模式的 trade-off 曲線，附 β 下界與摘要"""
    table = Table(columns=["mode", "alpha", "beta", "advantage", "std_error", "beta_lb"])
    for mode in config.modes:
        rng = _mode_stream(config.seed, mode)
        curve, lower, bounds, channel = _simulate_mode(config, mode, rng, config.threads)
        errors = curve.std_error()
        for i, (alpha, beta) in enumerate(curve.points):
            table.add(mode.kind.value, alpha, beta, alpha - beta, float(errors[i]), float(lower.betas[i]))

        summary = {
            "mode": mode.label,
            "avg_advantage": avg_advantage(curve),
            "advantage_at_0.999": _safe_advantage_at(curve),
            "bound_exact": bounds.exact,
            "bound_approx": bounds.approx,
            "n_samples": curve.n_samples,
            "clamped": curve.clamped,
        }
        if channel is not None:
            summary["channel_bound"] = channel.exact
        table.summary.append(summary)
        logger.info(f"[Simulate] {mode.label} avg_advantage={summary['avg_advantage']:.4f}")
    return table


# ============================================================================
# delta-factor / setsize
# ============================================================================

def cmd_delta_factor(q_grid: Sequence[float], temperatures: Sequence[float], k: int,
                     margin: Optional[float] = None) -> Table:
    """δ_{T,q} 網格"""
    table = Table(columns=["k", "temperature", "q", "delta"])
    for temperature in temperatures:
        for q in q_grid:
            table.add(k, float(temperature), float(q), delta_factor(float(temperature), float(q), k, margin))
    return table


def cmd_setsize(config: RunConfig, q_grid: Sequence[float], temperatures: Sequence[float]) -> Table:
    """平均決策集大小（out / in / 平均）"""
    pair = profile_to_pair(config.profile)
    rows = set_size_table(pair, q_grid, temperatures, config.n_mc, RngStream(config.seed).derive(3),
                          threads=config.threads)
    table = Table(columns=["q", "temperature", "size_out", "size_in", "size_avg"])
    for row in rows:
        table.add(row["q"], row["temperature"], row["size_out"], row["size_in"], row["size_avg"])
    return table


# ============================================================================
# fit / gen
# ============================================================================

def _fit(path: str, model: str, label: str, tol: float, max_iter: int, clamp: float,
         renormalize: bool) -> FitResult:
    data = ingest_csv(path, clamp=clamp, renormalize=renormalize, label=label)
    if model == "beta":
        return fit_beta_tlc(data, tol=tol, max_iter=max_iter)
    return fit_dirichlet(data, tol=tol, max_iter=max_iter)


def cmd_fit(
    input_path: str,
    model: str = "dirichlet",
    in_path: Optional[str] = None,
    p_star: Optional[float] = None,
    tol: float = 1e-8,
    max_iter: int = 1000,
    clamp: float = DEFAULT_CLAMP,
    renormalize: bool = True,
) -> Table:
    """
    擬合一個（或 out/in 兩個）資料檔

    兩個檔案且給定 p_star 時，另外輸出反推的 (Δ, ϵa, ϵe)。
    """
    if model not in ("dirichlet", "beta"):
        raise ValidationError(f"model must be dirichlet or beta, got {model!r}")
    datasets: List[Tuple[str, str]] = [("out" if in_path else "data", input_path)]
    if in_path:
        datasets.append(("in", in_path))

    table = Table(columns=["dataset", "component", "gamma_hat", "mean"])
    results: Dict[str, FitResult] = {}
    for name, path in datasets:
        label = name if name in ("out", "in") else "unknown"
        result = _fit(path, model, label, tol, max_iter, clamp, renormalize)
        results[name] = result
        for j, (gamma, mean) in enumerate(zip(result.gamma_hat, result.mean)):
            table.add(name, j, float(gamma), float(mean))
        table.summary.append({"dataset": name, "model": model, "path": str(path),
                              **{key: value for key, value in result.to_dict().items() if key != "gamma_hat"}})

    if in_path:
        pair, mismatch = fitted_pair(results["out"].gamma_hat, results["in"].gamma_hat)
        report = {"sum_mismatch": mismatch}
        if p_star is None:
            logger.info("[Fit] --p-star not given; skipping profile inference")
        else:
            try:
                profile = infer_profile(pair, p_star, rel_tol=1.0)
                report.update({"k": profile.k, "delta": profile.delta, "eps_a": profile.eps_a,
                               "eps_e": profile.eps_e})
            except ValidationError as exc:
                report["profile_error"] = str(exc)
        table.summary.append(report)
    return table


def cmd_gen(config: RunConfig, hypothesis: str, n: int) -> str:
    """合成信心資料（CSV 文字，註解行嵌入設定）"""
    pair = profile_to_pair(config.profile)
    rng = RngStream(config.seed).derive(4, HYPOTHESIS_STREAMS[hypothesis])
    dataset = generate_dataset(pair, hypothesis, n, rng)
    comments = [
        f"profile: k={config.profile.k} delta={config.profile.delta!r} "
        f"eps_a={config.profile.eps_a!r} eps_e={config.profile.eps_e!r}",
        f"hypothesis: {hypothesis} n={n} seed={config.seed}",
    ]
    return format_csv(dataset, comments)


# ============================================================================
# sweep
# ============================================================================

def _sweep_task(task) -> Tuple[int, int, Optional[tuple], Optional[str]]:
    cell_index, mode_index, value, cell = task
    mode = cell.modes[mode_index]
    try:
        rng = _mode_stream(cell.seed, mode, cell_index)
        curve, _, bounds, _ = _simulate_mode(cell, mode, rng, threads=1)
        row = (bounds.exact, bounds.approx, avg_advantage(curve), _safe_advantage_at(curve),
               advantage_std_error(curve))
        return cell_index, mode_index, row, None
    except LabError as exc:
        return cell_index, mode_index, None, f"{value:g} {mode.label}: {exc}"


def cmd_sweep(spec: SweepSpec) -> Table:
    """
    掃描單一參數，每個值 × 每個模式做上界與模擬

    無效的掃描值（或無法計算的模式）記錄在 skipped，不會默默丟棄。
    """
    table = Table(columns=["parameter", "value", "mode", "bound_exact", "bound_approx",
                           "sim_avg_adv", "sim_adv_at_0.999", "sim_std_error"])
    tasks = []
    for cell_index, value in enumerate(spec.values):
        try:
            cell = spec.cell(value)
        except LabError as exc:
            table.skipped.append(f"{spec.parameter}={value:g}: {exc}")
            logger.warning(f"[Sweep] skipping {spec.parameter}={value:g}: {exc}")
            continue
        for mode_index in range(len(cell.modes)):
            tasks.append((cell_index, mode_index, value, cell))

    logger.info(f"[Sweep] {spec.parameter}: {len(tasks)} tasks on {spec.base.threads} threads")
    results = ordered_map(_sweep_task, tasks, spec.base.threads)
    for (cell_index, mode_index, value, cell), (_, _, row, error) in zip(tasks, results):
        mode = cell.modes[mode_index]
        if error is not None:
            table.skipped.append(f"{spec.parameter}={error}")
            continue
        table.add(spec.parameter, float(value), mode.label, *row)
    return table
