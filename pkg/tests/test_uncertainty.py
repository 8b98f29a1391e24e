"""
測試 Uncertainty Module

測試範圍：
1. UncertaintyProfile 驗證（不等式原文）
2. profile_to_pair 的參數與總和
3. 平均、變異數
4. infer_profile 往返與擬合參數對的整理
"""

import sys
from pathlib import Path

# 將 src 目錄加入路徑
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import numpy as np
import pytest

from errors import ValidationError
from uncertainty import (
    DirichletPair,
    GroundTruthConfidence,
    UncertaintyProfile,
    empirical_calibration_error,
    fitted_pair,
    infer_profile,
    pair_means,
    pair_variances,
    profile_to_pair,
)


@pytest.fixture
def reference_profile():
    """標準比較設定 K=10, Δ=0.2, ϵa=0.5, ϵe=0.25"""
    return UncertaintyProfile(k=10, delta=0.2, eps_a=0.5, eps_e=0.25)


def random_valid_profiles(count, seed=0):
    """隨機產生合法設定"""
    rng = np.random.default_rng(seed)
    profiles = []
    while len(profiles) < count:
        k = int(rng.integers(2, 12))
        eps_a = float(rng.uniform(0.05, 1.0 - 1.0 / k))
        delta_max = eps_a / (1.0 - eps_a)
        delta = float(rng.uniform(-0.5, 0.95 * delta_max))
        eps_e = float(10 ** rng.uniform(-2.5, 0.0))
        profiles.append(UncertaintyProfile(k=k, delta=delta, eps_a=eps_a, eps_e=eps_e))
    return profiles


class TestProfileValidation:
    """測試設定驗證"""

    def test_defaults_are_reference(self, reference_profile):
        assert UncertaintyProfile() == reference_profile

    def test_calibration_constraint(self):
        """Δ/(1+Δ) = 0.1667 > ϵa = 0.1"""
        with pytest.raises(ValidationError) as info:
            UncertaintyProfile(k=10, delta=0.2, eps_a=0.1, eps_e=0.25)
        assert "Δ/(1+Δ)<ϵa" in str(info.value)
        assert info.value.inequality == "Δ/(1+Δ)<ϵa"

    @pytest.mark.parametrize(
        "kwargs, inequality",
        [
            ({"k": 1}, "K≥2"),
            ({"eps_e": 0.0}, "ϵe>0"),
            ({"eps_a": 0.0, "delta": 0.0}, "ϵa≥1e-9"),
            ({"eps_a": 0.95}, "ϵa≤1−1/K"),
            ({"delta": -1.0}, "Δ>−1"),
        ],
    )
    def test_each_inequality(self, kwargs, inequality):
        with pytest.raises(ValidationError) as info:
            UncertaintyProfile(**kwargs)
        assert inequality in str(info.value)

    def test_negative_delta_accepted(self):
        """低估自信（Δ < 0）也是合法設定"""
        profile = UncertaintyProfile(delta=-0.3)
        pair = profile_to_pair(profile)
        assert np.all(pair.gamma_in > 0.0)

    def test_upper_eps_a_boundary(self):
        """ϵa = 1 − 1/K 本身合法"""
        UncertaintyProfile(k=4, delta=0.0, eps_a=0.75, eps_e=0.1)

    def test_ground_truth_range(self):
        GroundTruthConfidence(p_star_0=0.5, k=2)
        with pytest.raises(ValidationError):
            GroundTruthConfidence(p_star_0=0.05, k=10)


class TestProfileToPair:
    """測試參數對應"""

    def test_reference_values(self, reference_profile):
        pair = profile_to_pair(reference_profile)
        assert pair.gamma_out[0] == pytest.approx(2.0)
        np.testing.assert_allclose(pair.gamma_out[1:], 2.0 / 9.0)
        assert pair.gamma_in[0] == pytest.approx(2.4)
        np.testing.assert_allclose(pair.gamma_in[1:], 1.6 / 9.0)

    def test_sums_equal_inverse_epistemic(self):
        for profile in random_valid_profiles(50, seed=1):
            pair = profile_to_pair(profile)
            sum_out, sum_in = pair.sums
            assert sum_out == pytest.approx(1.0 / profile.eps_e, rel=1e-12)
            assert sum_in == pytest.approx(1.0 / profile.eps_e, rel=1e-12)
            assert np.all(pair.gamma_out > 0.0) and np.all(pair.gamma_in > 0.0)

    def test_zero_delta_collapses(self):
        pair = profile_to_pair(UncertaintyProfile(delta=0.0))
        np.testing.assert_allclose(pair.gamma_in, pair.gamma_out, rtol=1e-15)

    def test_pair_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            DirichletPair(gamma_out=np.array([1.0, 0.0]), gamma_in=np.array([1.0, 1.0]))

    def test_aggregated_marginal(self, reference_profile):
        marginal = profile_to_pair(reference_profile).aggregated()
        np.testing.assert_allclose(marginal.gamma_out, [2.0, 2.0])
        np.testing.assert_allclose(marginal.gamma_in, [2.4, 1.6])


class TestMomentsAndInference:
    """測試平均、變異數與反推"""

    def test_means(self, reference_profile):
        mean_out, mean_in = pair_means(profile_to_pair(reference_profile))
        assert mean_out[0] == pytest.approx(0.5)
        assert mean_in[0] == pytest.approx(0.6)

    def test_symmetric_means(self):
        pair = DirichletPair(gamma_out=np.ones(4), gamma_in=np.ones(4))
        np.testing.assert_allclose(pair_means(pair)[0], 0.25)

    def test_variances(self):
        pair = DirichletPair(gamma_out=np.ones(2), gamma_in=np.ones(2))
        var_out, _ = pair_variances(pair)
        np.testing.assert_allclose(var_out, 1.0 / 12.0)

    def test_variance_shrinks_with_epistemic(self, reference_profile):
        small = pair_variances(profile_to_pair(reference_profile.replace(eps_e=1e-4)))[0]
        large = pair_variances(profile_to_pair(reference_profile))[0]
        assert np.all(small < large)
        assert small.max() < 1e-4

    def test_in_mean_exceeds_out_mean_iff_overconfident(self):
        for profile in random_valid_profiles(40, seed=2):
            mean_out, mean_in = pair_means(profile_to_pair(profile))
            if profile.delta > 1e-9:
                assert mean_in[0] > mean_out[0]
            elif profile.delta < -1e-9:
                assert mean_in[0] < mean_out[0]

    def test_round_trip(self):
        """profile → pair → profile 為恆等（1e-12）"""
        for profile in random_valid_profiles(100, seed=3):
            recovered = infer_profile(profile_to_pair(profile), profile.p_star_0)
            assert recovered.k == profile.k
            assert recovered.delta == pytest.approx(profile.delta, abs=1e-12)
            assert recovered.eps_a == pytest.approx(profile.eps_a, abs=1e-12)
            assert recovered.eps_e == pytest.approx(profile.eps_e, rel=1e-12)

    def test_identical_pair_gives_zero_delta(self):
        pair = profile_to_pair(UncertaintyProfile(delta=0.0))
        mean_out, _ = pair_means(pair)
        assert infer_profile(pair, float(mean_out[0])).delta == pytest.approx(0.0, abs=1e-14)

    def test_mismatched_sums_rejected(self):
        pair = DirichletPair(gamma_out=np.array([2.0, 1.0, 1.0]), gamma_in=np.array([2.5, 1.0, 1.0]))
        with pytest.raises(ValidationError) as info:
            infer_profile(pair, 0.5)
        assert "Σγout=Σγin" in str(info.value)

    def test_fitted_pair_symmetrizes(self):
        pair, mismatch = fitted_pair(np.array([2.0, 0.2, 0.24, 0.2]), np.array([2.4, 0.2, 0.1, 0.1]))
        np.testing.assert_allclose(pair.gamma_out[1:], 0.64 / 3.0)
        np.testing.assert_allclose(pair.gamma_in[1:], 0.4 / 3.0)
        assert mismatch == pytest.approx(abs(2.64 - 2.8) / 2.8)
        profile = infer_profile(pair, 0.75, rel_tol=0.1)
        assert profile.eps_e == pytest.approx(1.0 / 2.64)

    def test_empirical_calibration_error(self):
        rows = np.array([[0.6, 0.4], [0.7, 0.3]])
        assert empirical_calibration_error(rows, 0.5) == pytest.approx(0.3)
        with pytest.raises(ValidationError):
            empirical_calibration_error(np.empty((0, 2)), 0.5)
