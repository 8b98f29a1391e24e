"""
測試 LiRA Module

測試範圍：
1. 揭露模式與 α 網格
2. LLR（CV / TLC）的對稱性與期望值符號
3. 決策集通道（Taichi kernel 對照閉式、極限行為、集合大小）
4. Trade-off 模擬（確定性、優勢統計）
5. 上界有效性（隨機設定 × 三種模式）與逐點模式排序
6. 優勢對 Δ、ϵa、ϵe、T 的單調性
"""

import logging
import sys
from pathlib import Path

# 將 src 目錄加入路徑
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import numpy as np
import pytest

from errors import DomainError, RangeError, SizeError
from numerics import RngStream, bit_outcomes, product_bernoulli_pmf, sample_dirichlet, soft_threshold
from uncertainty import UncertaintyProfile, profile_to_pair
from bounds import advantage_ub, beta_lb_curve, cv_advantage_ub, ds_advantage_ub, mode_divergences
from lira import (
    DecisionSetChannel,
    DisclosureKind,
    DisclosureMode,
    HIGH_TNR,
    DsPmfPair,
    TradeoffCurve,
    advantage_at,
    advantage_std_error,
    avg_advantage,
    default_alphas,
    discrete_roc_betas,
    ds_pmfs,
    empirical_betas,
    expected_set_size,
    llr_cv,
    llr_cv_batch,
    llr_tlc,
    set_size_table,
    simulate_tradeoff,
    validate_alphas,
)

N_SAMPLES = 100_000
N_MC = 10_000
N_MC_FINE = 100_000


@pytest.fixture
def reference_pair():
    return profile_to_pair(UncertaintyProfile(k=10, delta=0.2, eps_a=0.5, eps_e=0.25))


@pytest.fixture
def small_pair():
    """K = 3，Taichi kernel 測試用"""
    return profile_to_pair(UncertaintyProfile(k=3, delta=0.3, eps_a=0.5, eps_e=0.2))


class TestDisclosureMode:
    """測試揭露模式"""

    def test_parse(self):
        assert DisclosureMode.parse("CV").kind is DisclosureKind.CV
        mode = DisclosureMode.parse("ds", q=0.3, temperature=0.05)
        assert mode.q == 0.3
        assert mode.label == "DS(q=0.3,T=0.05)"

    def test_unknown_mode(self):
        with pytest.raises(DomainError):
            DisclosureMode.parse("logits")

    def test_ds_parameters(self):
        with pytest.raises(DomainError):
            DisclosureMode.ds(q=1.5)
        with pytest.raises(DomainError):
            DisclosureMode.ds(q=0.2, temperature=-0.1)
        with pytest.raises(DomainError):
            DisclosureMode(DisclosureKind.CV, q=0.2)

    def test_alpha_grid(self):
        grid = default_alphas(999)
        assert grid[0] == pytest.approx(0.001)
        assert grid[-1] == pytest.approx(0.999)
        with pytest.raises(DomainError):
            validate_alphas([0.0, 0.5])
        with pytest.raises(DomainError):
            validate_alphas([0.5, 0.4])


class TestLLR:
    """測試 LLR"""

    def test_antisymmetry(self, reference_pair):
        samples = sample_dirichlet(reference_pair.gamma_in, RngStream(1), size=50)
        for p in samples:
            assert llr_cv(p, reference_pair) == pytest.approx(-llr_cv(p, reference_pair.swapped()), abs=1e-10)

    def test_identical_pair_is_zero(self):
        pair = profile_to_pair(UncertaintyProfile(delta=0.0))
        p = np.full(10, 0.1)
        assert llr_cv(p, pair) == pytest.approx(0.0, abs=1e-12)
        assert llr_tlc(0.3, pair) == pytest.approx(0.0, abs=1e-12)

    def test_expected_sign(self, reference_pair):
        """E_out[LLR] = KL(out‖in) > 0，E_in[LLR] = −KL(in‖out) < 0"""
        div = mode_divergences(reference_pair, DisclosureMode.cv())
        out, _ = llr_cv_batch(sample_dirichlet(reference_pair.gamma_out, RngStream(2), size=50_000), reference_pair)
        inn, _ = llr_cv_batch(sample_dirichlet(reference_pair.gamma_in, RngStream(3), size=50_000), reference_pair)
        assert out.mean() > 0.0 > inn.mean()
        assert out.mean() == pytest.approx(div.d_out_in, abs=5.0 * out.std() / np.sqrt(50_000))

    def test_tlc_matches_two_class_cv(self, reference_pair):
        marginal = reference_pair.aggregated()
        for p0 in (0.05, 0.3, 0.5, 0.92):
            assert llr_tlc(p0, reference_pair) == pytest.approx(llr_cv(np.array([p0, 1.0 - p0]), marginal))

    def test_zero_component_clamped(self, reference_pair, caplog):
        p = np.zeros(10)
        p[0] = 1.0
        with caplog.at_level(logging.WARNING):
            value = llr_cv(p, reference_pair)
        assert np.isfinite(value)
        assert "clamped" in caplog.text

    def test_shape_mismatch(self, reference_pair):
        with pytest.raises(DomainError):
            llr_cv(np.array([0.5, 0.5]), reference_pair)


class TestDecisionSetChannel:
    """測試決策集通道"""

    def test_kernel_matches_product_bernoulli(self, small_pair):
        """單一樣本時 kernel 結果等於閉式乘積 Bernoulli"""
        channel = DecisionSetChannel(3, q=0.3, temperature=0.1)
        p = np.array([[0.5, 0.2, 0.3]])
        expected = product_bernoulli_pmf(soft_threshold(p[0] - 0.3, 0.1))
        np.testing.assert_allclose(channel.outcome_pmf(p), expected, rtol=1e-10)

    def test_kernel_averages_samples(self):
        channel = DecisionSetChannel(3, q=0.25, temperature=0.05)
        samples = sample_dirichlet(np.array([1.0, 2.0, 0.5]), RngStream(4), size=200)
        expected = product_bernoulli_pmf(soft_threshold(samples - 0.25, 0.05)).mean(axis=0)
        np.testing.assert_allclose(channel.outcome_pmf(samples), expected, rtol=1e-9, atol=1e-14)

    def test_hard_threshold_counts(self):
        channel = DecisionSetChannel(2, q=0.5, temperature=0.0)
        samples = np.array([[0.7, 0.3], [0.2, 0.8], [0.6, 0.4], [0.5, 0.5]])
        # 索引 b = b0 + 2 b1
        np.testing.assert_allclose(channel.outcome_pmf(samples), [0.0, 0.5, 0.25, 0.25])

    def test_infinite_temperature_uniform(self, small_pair):
        pmfs = ds_pmfs(small_pair, DisclosureMode.ds(0.3, float("inf")), N_MC, RngStream(5))
        np.testing.assert_allclose(pmfs.pmf_out, np.full(8, 0.125))
        np.testing.assert_allclose(pmfs.pmf_in, np.full(8, 0.125))

    def test_pmfs_normalized(self, small_pair):
        pmfs = ds_pmfs(small_pair, DisclosureMode.ds(0.3, 0.05), N_MC, RngStream(6))
        assert pmfs.pmf_out.sum() == pytest.approx(1.0)
        assert pmfs.pmf_in.sum() == pytest.approx(1.0)
        assert pmfs.outcomes.shape == (8, 3)

    def test_small_temperature_approaches_hard_threshold(self, small_pair):
        hard = ds_pmfs(small_pair, DisclosureMode.ds(0.3, 0.0), N_MC, RngStream(7))
        soft = ds_pmfs(small_pair, DisclosureMode.ds(0.3, 1e-6), N_MC, RngStream(7))
        np.testing.assert_allclose(soft.pmf_out, hard.pmf_out, atol=1e-3)

    def test_size_limit(self):
        with pytest.raises(SizeError):
            DecisionSetChannel(17, q=0.2, temperature=0.0)

    def test_n_mc_floor(self, small_pair):
        with pytest.raises(DomainError):
            ds_pmfs(small_pair, DisclosureMode.ds(0.3, 0.0), 100, RngStream(8))

    def test_set_size_limits(self, reference_pair):
        rng = RngStream(9)
        assert expected_set_size(reference_pair, 0.3, float("inf"), "out", N_MC, rng) == pytest.approx(5.0)
        assert expected_set_size(reference_pair, 0.0, 0.0, "in", N_MC, rng) == pytest.approx(10.0)
        assert expected_set_size(reference_pair, 1.0, 0.0, "out", N_MC, rng) == 0.0

    def test_set_size_table(self, reference_pair):
        rows = set_size_table(reference_pair, [0.1, 0.2, 0.5], [0.0, 0.05], N_MC, RngStream(10))
        assert len(rows) == 6
        for row in rows:
            assert row["size_avg"] == pytest.approx(0.5 * (row["size_out"] + row["size_in"]))
        hard = [row["size_out"] for row in rows if row["temperature"] == 0.0]
        assert hard == sorted(hard, reverse=True)


class TestTradeoffHelpers:
    """測試 β 計算與優勢統計"""

    def test_identical_llr_is_diagonal(self):
        rng = np.random.default_rng(0)
        llr = rng.normal(size=200_000)
        alphas = default_alphas(99)
        np.testing.assert_allclose(empirical_betas(llr, llr.copy(), alphas), alphas, atol=1e-4)

    def test_discrete_roc_hand_example(self):
        pmfs = DsPmfPair(outcomes=bit_outcomes(1), pmf_out=[0.5, 0.5], pmf_in=[0.1, 0.9])
        betas = discrete_roc_betas(pmfs, np.array([0.25, 0.5, 0.75]))
        np.testing.assert_allclose(betas, [0.05, 0.1, 0.55])

    def test_equal_pmfs_are_diagonal(self):
        pmf = np.full(4, 0.25)
        pmfs = DsPmfPair(outcomes=bit_outcomes(2), pmf_out=pmf, pmf_in=pmf.copy())
        alphas = default_alphas(99)
        np.testing.assert_allclose(discrete_roc_betas(pmfs, alphas), alphas, atol=1e-12)

    def test_avg_advantage_limits(self):
        alphas = default_alphas(999)
        assert avg_advantage(TradeoffCurve.diagonal(alphas)) == pytest.approx(0.0)
        assert avg_advantage(TradeoffCurve(alphas, np.zeros_like(alphas))) == pytest.approx(0.5)

    def test_advantage_at(self):
        alphas = default_alphas(999)
        curve = TradeoffCurve(alphas, alphas * 0.5)
        assert advantage_at(curve, 0.999) == pytest.approx(0.4995)
        with pytest.raises(RangeError):
            advantage_at(curve, 0.9995)


class TestSimulateTradeoff:
    """測試 trade-off 模擬"""

    def test_sample_floor(self, reference_pair):
        with pytest.raises(DomainError):
            simulate_tradeoff(reference_pair, DisclosureMode.cv(), 1000, default_alphas(99), RngStream(1))

    def test_deterministic_across_threads(self, reference_pair):
        alphas = default_alphas(99)
        single = simulate_tradeoff(reference_pair, DisclosureMode.cv(), 150_000, alphas, RngStream(42), threads=1)
        multi = simulate_tradeoff(reference_pair, DisclosureMode.cv(), 150_000, alphas, RngStream(42), threads=4)
        assert np.array_equal(single.betas, multi.betas)

    def test_identical_pair_near_diagonal(self):
        pair = profile_to_pair(UncertaintyProfile(delta=0.0))
        curve = simulate_tradeoff(pair, DisclosureMode.cv(), N_SAMPLES, default_alphas(99), RngStream(11))
        assert abs(avg_advantage(curve)) < 5.0 * curve.std_error().max()

    def test_within_bounds(self, reference_pair):
        alphas = default_alphas(99)
        mode = DisclosureMode.cv()
        curve = simulate_tradeoff(reference_pair, mode, N_SAMPLES, alphas, RngStream(13))
        assert np.max(curve.advantages) <= cv_advantage_ub(UncertaintyProfile()).exact + 0.01

        lower = beta_lb_curve(mode_divergences(reference_pair, mode), alphas)
        assert np.all(curve.betas >= lower.betas - 0.01)

    def test_threshold_peak_is_interior(self, reference_pair):
        """T = 0 時 DS 平均優勢在中等門檻達到最大"""
        alphas = default_alphas(99)
        q_grid = np.round(np.arange(0.05, 0.96, 0.05), 2)
        advantages = [
            avg_advantage(simulate_tradeoff(reference_pair, DisclosureMode.ds(float(q), 0.0), 0, alphas,
                                            RngStream(14), n_mc=100_000))
            for q in q_grid
        ]
        assert 0.3 <= q_grid[int(np.argmax(advantages))] <= 0.8


def random_profiles(count, seed):
    """隨機的合法設定（K ≤ 8，避免極小的 Dirichlet 分量）"""
    rng = np.random.default_rng(seed)
    profiles = []
    while len(profiles) < count:
        k = int(rng.integers(2, 9))
        eps_a = float(rng.uniform(0.1, 0.9 * (1.0 - 1.0 / k)))
        delta = float(rng.uniform(-0.3, 0.9 * eps_a / (1.0 - eps_a)))
        eps_e = float(10 ** rng.uniform(-2.0, -0.5))
        profiles.append(UncertaintyProfile(k=k, delta=delta, eps_a=eps_a, eps_e=eps_e))
    return profiles


def ordering_slack(first, second):
    """兩條獨立模擬曲線逐點比較時的 3 個標準誤差"""
    return 3.0 * np.sqrt(first.std_error() ** 2 + second.std_error() ** 2)


class TestBoundValidity:
    """模擬結果必須落在上界與 β 下界之內"""

    ALPHAS = np.union1d(default_alphas(99), [HIGH_TNR])

    def test_random_profiles_all_modes(self):
        profiles = random_profiles(50, seed=31)
        q_values = np.random.default_rng(32).uniform(0.05, 0.95, size=len(profiles))
        for index, (profile, q) in enumerate(zip(profiles, q_values)):
            pair = profile_to_pair(profile)
            for mode in (DisclosureMode.cv(), DisclosureMode.tlc(), DisclosureMode.ds(float(q), 0.0)):
                rng = RngStream(100 + index)
                pmfs = ds_pmfs(pair, mode, N_MC_FINE, rng) if mode.kind is DisclosureKind.DS else None
                curve = simulate_tradeoff(pair, mode, N_SAMPLES, self.ALPHAS, rng, pmfs=pmfs)
                noise = 4.0 * curve.std_error()

                bound = advantage_ub(profile, mode)
                assert np.all(curve.advantages <= bound.exact + noise), (profile, mode.label)

                lower = beta_lb_curve(mode_divergences(pair, mode, pmfs), self.ALPHAS, mode)
                assert np.all(curve.betas >= lower.betas - noise), (profile, mode.label)

    @pytest.mark.parametrize("q", [0.005, 0.95])
    def test_decision_set_bound_near_threshold_ends(self, reference_pair, q):
        """門檻接近 0 或 1 時通道仍有資訊，上界不可為 0"""
        profile = UncertaintyProfile(k=10, delta=0.2, eps_a=0.5, eps_e=0.25)
        curve = simulate_tradeoff(reference_pair, DisclosureMode.ds(q, 0.0), 0, self.ALPHAS,
                                  RngStream(33), n_mc=N_MC_FINE)
        bound = ds_advantage_ub(profile, 0.0, q)
        assert bound.factor == pytest.approx(1.0)
        assert np.max(curve.advantages) <= bound.exact + 3.0 * curve.std_error().max()


class TestModeOrdering:
    """CV 提供最多資訊，其次為 TLC，再其次為 DS"""

    ALPHAS = np.union1d(default_alphas(99), [HIGH_TNR])

    @pytest.fixture
    def curves(self, reference_pair):
        return {
            "cv": simulate_tradeoff(reference_pair, DisclosureMode.cv(), N_SAMPLES, self.ALPHAS, RngStream(41)),
            "tlc": simulate_tradeoff(reference_pair, DisclosureMode.tlc(), N_SAMPLES, self.ALPHAS, RngStream(42)),
            "ds": simulate_tradeoff(reference_pair, DisclosureMode.ds(0.2, 0.0), 0, self.ALPHAS, RngStream(43),
                                    n_mc=N_MC_FINE),
        }

    def test_pointwise_betas(self, curves):
        assert np.all(curves["cv"].betas <= curves["tlc"].betas + ordering_slack(curves["cv"], curves["tlc"]))
        assert np.all(curves["tlc"].betas <= curves["ds"].betas + ordering_slack(curves["tlc"], curves["ds"]))

    def test_high_tnr_advantage(self, curves):
        at = {name: advantage_at(curve, HIGH_TNR) for name, curve in curves.items()}
        slack_cv_tlc = ordering_slack(curves["cv"], curves["tlc"])[-1]
        slack_tlc_ds = ordering_slack(curves["tlc"], curves["ds"])[-1]
        assert at["cv"] >= at["tlc"] - slack_cv_tlc
        assert at["tlc"] >= at["ds"] - slack_tlc_ds
        assert at["cv"] > 0.0

    def test_average_advantage(self, curves):
        averages = {name: avg_advantage(curve) for name, curve in curves.items()}
        assert averages["cv"] > averages["tlc"] > averages["ds"] > 0.0


class TestAdvantageMonotonicity:
    """模擬平均優勢隨 Δ 遞增、隨 ϵa 與 ϵe 遞減"""

    ALPHAS = default_alphas(99)

    def _averages(self, profiles):
        values, errors = [], []
        for profile in profiles:
            curve = simulate_tradeoff(profile_to_pair(profile), DisclosureMode.cv(), N_SAMPLES,
                                      self.ALPHAS, RngStream(51))
            values.append(avg_advantage(curve))
            errors.append(advantage_std_error(curve))
        return np.array(values), np.array(errors)

    def _assert_nondecreasing(self, values, errors):
        slack = 3.0 * np.sqrt(errors[1:] ** 2 + errors[:-1] ** 2)
        assert np.all(np.diff(values) >= -slack)

    def test_increasing_in_calibration_error(self):
        profiles = [UncertaintyProfile(10, delta, 0.5, 0.25) for delta in (0.0, 0.1, 0.2, 0.3, 0.45)]
        self._assert_nondecreasing(*self._averages(profiles))

    def test_decreasing_in_aleatoric_uncertainty(self):
        profiles = [UncertaintyProfile(10, 0.2, eps_a, 0.25) for eps_a in (0.85, 0.7, 0.5, 0.3)]
        self._assert_nondecreasing(*self._averages(profiles))

    def test_decreasing_in_epistemic_uncertainty(self):
        profiles = [UncertaintyProfile(10, 0.2, 0.5, eps_e) for eps_e in (0.5, 0.25, 0.1, 0.05)]
        self._assert_nondecreasing(*self._averages(profiles))


class TestDecisionSetStatistics:
    """決策集結果分佈的 Monte Carlo 穩定性與溫度效應"""

    ALPHAS = default_alphas(99)

    def test_exact_roc_stable_across_seeds(self, reference_pair):
        mode = DisclosureMode.ds(0.2, 0.0)
        first = simulate_tradeoff(reference_pair, mode, 0, self.ALPHAS, RngStream(61), n_mc=N_MC_FINE)
        second = simulate_tradeoff(reference_pair, mode, 0, self.ALPHAS, RngStream(62), n_mc=N_MC_FINE)
        assert np.max(np.abs(first.betas - second.betas)) <= 0.01

    def test_average_advantage_nonincreasing_in_temperature(self, reference_pair):
        values, errors = [], []
        for temperature in (0.0, 0.01, 0.05, 0.1, 1.0, 10.0):
            curve = simulate_tradeoff(reference_pair, DisclosureMode.ds(0.2, temperature), 0, self.ALPHAS,
                                      RngStream(63), n_mc=N_MC_FINE)
            values.append(avg_advantage(curve))
            errors.append(advantage_std_error(curve))
        values, errors = np.array(values), np.array(errors)
        slack = 3.0 * np.sqrt(errors[1:] ** 2 + errors[:-1] ** 2)
        assert np.all(np.diff(values) <= slack)
        assert values[-1] < 0.01
