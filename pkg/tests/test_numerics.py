"""
測試 Numerics Module

測試範圍：
1. ln Γ、ψ、ψ⁻¹ 與 ln B 的數值正確性
2. 二元 KL 與二分法
3. 隨機串流的可重現性與取樣器的動差
4. 乘積 Bernoulli 工具與區塊平行抽樣
"""

import sys
from pathlib import Path

# 將 src 目錄加入路徑
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import numpy as np
import pytest
from scipy import special

from errors import BracketingError, DomainError
from numerics import (
    RngStream,
    binary_kl,
    bisect,
    bit_outcomes,
    digamma,
    digamma_inverse,
    log_gamma,
    log_multivariate_beta,
    product_bernoulli_pmf,
    sample_beta,
    sample_blocks,
    sample_dirichlet,
    sample_gamma,
    soft_threshold,
)

EULER = 0.5772156649015329


class TestLogGamma:
    """測試 ln Γ"""

    def test_known_values(self):
        """ln Γ(1) = 0, ln Γ(1/2) = ln √π"""
        assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
        assert log_gamma(0.5) == pytest.approx(0.5 * np.log(np.pi), rel=1e-14)

    def test_array_input(self):
        """陣列輸入回傳陣列"""
        values = log_gamma(np.array([1.0, 2.0, 5.0]))
        np.testing.assert_allclose(values, [0.0, 0.0, np.log(24.0)], atol=1e-13)

    @pytest.mark.parametrize("x", [0.0, -1.0, np.inf, np.nan])
    def test_domain(self, x):
        """x ≤ 0 或非有限值應報錯"""
        with pytest.raises(DomainError):
            log_gamma(x)


class TestDigamma:
    """測試 ψ"""

    def test_known_values(self):
        """ψ(1) = −γ, ψ(1/2) = −γ − 2 ln 2, ψ(2) = 1 − γ"""
        assert digamma(1.0) == pytest.approx(-EULER, abs=1e-13)
        assert digamma(0.5) == pytest.approx(-EULER - 2.0 * np.log(2.0), abs=1e-13)
        assert digamma(2.0) == pytest.approx(1.0 - EULER, abs=1e-13)

    def test_matches_reference_on_wide_grid(self):
        """與 scipy 的實作一致"""
        x = np.logspace(-3, 4, 200)
        np.testing.assert_allclose(digamma(x), special.digamma(x), rtol=1e-12, atol=1e-12)

    def test_recurrence(self):
        """ψ(x+1) = ψ(x) + 1/x"""
        x = np.linspace(0.05, 20.0, 50)
        np.testing.assert_allclose(digamma(x + 1.0), digamma(x) + 1.0 / x, rtol=1e-12, atol=1e-12)

    def test_scalar_returns_float(self):
        assert isinstance(digamma(3.0), float)

    def test_domain(self):
        with pytest.raises(DomainError):
            digamma(0.0)
        with pytest.raises(DomainError):
            digamma(np.array([1.0, -2.0]))


class TestDigammaInverse:
    """測試 ψ⁻¹"""

    def test_inverse_of_digamma(self):
        """ψ(ψ⁻¹(y)) = y 於 1e-10 內"""
        y = np.linspace(-20.0, 10.0, 61)
        x = digamma_inverse(y)
        assert np.all(x > 0.0)
        np.testing.assert_allclose(digamma(x), y, atol=1e-10)

    def test_recovers_argument(self):
        """ψ⁻¹(ψ(x)) = x"""
        x = np.array([0.01, 0.1, 0.5, 1.0, 3.0, 50.0, 1e3])
        np.testing.assert_allclose(digamma_inverse(digamma(x)), x, rtol=1e-9)

    def test_known_value(self):
        """ψ⁻¹(−γ) = 1"""
        assert digamma_inverse(-EULER) == pytest.approx(1.0, rel=1e-10)

    def test_non_finite(self):
        with pytest.raises(DomainError):
            digamma_inverse(np.inf)


class TestLogMultivariateBeta:
    """測試 ln B(γ)"""

    def test_uniform(self):
        """B(1,1) = 1"""
        assert log_multivariate_beta(np.array([1.0, 1.0])) == pytest.approx(0.0, abs=1e-15)

    def test_two_one(self):
        """B(2,1) = 1/2"""
        assert log_multivariate_beta(np.array([2.0, 1.0])) == pytest.approx(-np.log(2.0), rel=1e-14)

    def test_permutation_invariant(self):
        gamma = np.array([0.3, 2.5, 7.0, 1.1, 0.9])
        reference = log_multivariate_beta(gamma)
        rng = np.random.default_rng(3)
        for _ in range(10):
            assert log_multivariate_beta(rng.permutation(gamma)) == pytest.approx(reference, rel=1e-13)

    def test_rejects_short_or_nonpositive(self):
        with pytest.raises(DomainError):
            log_multivariate_beta(np.array([1.0]))
        with pytest.raises(DomainError):
            log_multivariate_beta(np.array([1.0, 0.0]))


class TestBinaryKL:
    """測試二元 KL"""

    def test_zero_at_equal_arguments(self):
        assert binary_kl(0.3, 0.3) == pytest.approx(0.0, abs=1e-15)

    def test_known_value(self):
        """d(1‖1/2) = ln 2"""
        assert binary_kl(1.0, 0.5) == pytest.approx(np.log(2.0), rel=1e-14)

    def test_boundary_conventions(self):
        """0·ln 0 = 0；支撐不一致為 +∞"""
        assert binary_kl(0.0, 0.0) == 0.0
        assert binary_kl(0.3, 0.0) == np.inf
        assert binary_kl(0.0, 0.4) == pytest.approx(-np.log(0.6), rel=1e-14)

    def test_quadratic_lower_bound(self):
        """d(a‖b) ≥ 2(a − b)² ≥ (a − b)²/2"""
        grid = np.linspace(0.001, 0.999, 101)
        a, b = np.meshgrid(grid, grid)
        value = binary_kl(a, b)
        gap = (a - b) ** 2
        assert np.all(value >= 2.0 * gap - 1e-15)
        assert np.all(value >= 0.5 * gap)

    def test_domain(self):
        with pytest.raises(DomainError):
            binary_kl(1.2, 0.5)


class TestBisect:
    """測試二分法"""

    def test_linear_root(self):
        root = bisect(lambda x: x - 0.25, 0.0, 1.0, tol=1e-10)
        assert abs(root - 0.25) <= 1e-10

    def test_no_sign_change(self):
        """x² 在 [1,2] 無根"""
        with pytest.raises(BracketingError):
            bisect(lambda x: x * x, 1.0, 2.0)

    def test_keep_feasible_end(self):
        """keep='hi' 回傳保留右端符號的端點"""
        f = lambda x: 0.25 - x  # noqa: E731
        hi = bisect(f, 0.0, 1.0, tol=1e-10, keep="hi")
        assert f(hi) <= 0.0
        assert hi == pytest.approx(0.25, abs=1e-10)

    def test_infinite_endpoint_value(self):
        """端點函數值可為 ∞"""
        root = bisect(lambda b: binary_kl(0.5, b) - 0.1, 0.0, 0.5, tol=1e-12)
        assert binary_kl(0.5, root) == pytest.approx(0.1, abs=1e-9)


class TestRngStream:
    """測試隨機串流"""

    def test_same_stream_same_sequence(self):
        a = RngStream(seed=7, stream_id=3).generator.random(5)
        b = RngStream(seed=7, stream_id=3).generator.random(5)
        np.testing.assert_array_equal(a, b)

    def test_different_streams_differ(self):
        a = RngStream(seed=7, stream_id=3).generator.random(5)
        b = RngStream(seed=7, stream_id=4).generator.random(5)
        assert not np.array_equal(a, b)

    def test_derive_is_deterministic(self):
        parent = RngStream(seed=11)
        assert parent.derive(2, 5).stream_id == RngStream(seed=11).derive(2, 5).stream_id
        assert parent.derive(2, 5).stream_id != parent.derive(5, 2).stream_id

    def test_streams_uncorrelated(self):
        n = 100_000
        pairs = [
            (RngStream(seed=7, stream_id=3), RngStream(seed=7, stream_id=4)),
            (RngStream(seed=42).derive(0, 1), RngStream(seed=42).derive(1, 1)),
        ]
        for first, second in pairs:
            r = np.corrcoef(first.generator.random(n), second.generator.random(n))[0, 1]
            assert abs(r) < 0.01

    def test_invalid_seed(self):
        with pytest.raises(DomainError):
            RngStream(seed=-1)


class TestSamplers:
    """測試 Gamma / Dirichlet / Beta 取樣器"""

    @pytest.mark.parametrize("shape", [0.3, 1.0, 4.5])
    def test_gamma_mean(self, shape):
        """平均值 = shape（shape < 1 走 boost 路徑）"""
        n = 200_000
        draws = sample_gamma(shape, RngStream(1), size=n)
        se = np.sqrt(shape / n)
        assert abs(draws.mean() - shape) < 5.0 * se

    def test_gamma_rejects_nonpositive_shape(self):
        with pytest.raises(DomainError):
            sample_gamma(0.0, RngStream(1), size=3)

    def test_dirichlet_rows_on_simplex(self):
        gamma = np.array([2.0, 0.5, 0.5])
        rows = sample_dirichlet(gamma, RngStream(2), size=50_000)
        np.testing.assert_allclose(rows.sum(axis=1), 1.0, atol=1e-12)
        np.testing.assert_allclose(rows.mean(axis=0), gamma / gamma.sum(), atol=5e-3)

    def test_dirichlet_variance(self):
        """Var p_k = γ_k(γ₀ − γ_k) / (γ₀²(γ₀ + 1))"""
        gamma = np.array([2.4, 0.4, 0.4, 0.8])
        total = gamma.sum()
        rows = sample_dirichlet(gamma, RngStream(5), size=100_000)
        expected = gamma * (total - gamma) / (total ** 2 * (total + 1.0))
        np.testing.assert_allclose(rows.var(axis=0), expected, rtol=0.05)

    def test_dirichlet_single_draw(self):
        row = sample_dirichlet(np.array([1.0, 1.0]), RngStream(3))
        assert row.shape == (2,)

    def test_beta_mean(self):
        draws = sample_beta(2.4, 1.6, RngStream(4), size=100_000)
        assert draws.mean() == pytest.approx(0.6, abs=5e-3)


class TestBernoulliHelpers:
    """測試乘積 Bernoulli 工具"""

    def test_soft_threshold_limits(self):
        x = np.array([-0.1, 0.0, 0.2])
        np.testing.assert_array_equal(soft_threshold(x, 0.0), [0.0, 1.0, 1.0])
        np.testing.assert_array_equal(soft_threshold(x, np.inf), [0.5, 0.5, 0.5])
        np.testing.assert_allclose(soft_threshold(x, 0.1), special.expit(x / 0.1))

    def test_product_pmf_ordering(self):
        """索引 b = b0 + 2·b1"""
        pmf = product_bernoulli_pmf(np.array([0.6, 0.4]))
        np.testing.assert_allclose(pmf, [0.24, 0.36, 0.16, 0.24])

    def test_bit_outcomes_match_pmf(self):
        u = np.array([0.2, 0.7, 0.9])
        bits = bit_outcomes(3)
        explicit = np.prod(np.where(bits == 1, u, 1.0 - u), axis=1)
        np.testing.assert_allclose(product_bernoulli_pmf(u), explicit)


class TestSampleBlocks:
    """測試區塊平行抽樣"""

    def test_independent_of_thread_count(self):
        """輸出與執行緒數無關"""
        def draw(stream, size):
            return stream.generator.random(size)

        serial = sample_blocks(draw, 5500, RngStream(9), label=0, threads=1, block=1000)
        parallel = sample_blocks(draw, 5500, RngStream(9), label=0, threads=4, block=1000)
        assert serial.shape == (5500,)
        np.testing.assert_array_equal(serial, parallel)

    def test_labels_give_distinct_draws(self):
        def draw(stream, size):
            return stream.generator.random(size)

        a = sample_blocks(draw, 100, RngStream(9), label=0)
        b = sample_blocks(draw, 100, RngStream(9), label=1)
        assert not np.array_equal(a, b)
