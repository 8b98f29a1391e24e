"""
Uncertainty Profile - 不確定性設定與 Dirichlet 參數對應

三個旋鈕：
    • Δ (delta): 相對校準誤差，Δ > 0 代表過度自信
    • ϵa (eps_a): 偶然不確定性，1 − p*₀
    • ϵe (eps_e): 知識不確定性，Dirichlet 參數總和的倒數

對應關係（索引 0 為真實標籤）：
    γout_0 = (1−ϵa)/ϵe               γout_k = ϵa/((K−1)ϵe)
    γin_0  = (1+Δ)(1−ϵa)/ϵe          γin_k  = (ϵaΔ+ϵa−Δ)/((K−1)ϵe)
"""

import logging
from dataclasses import asdict, dataclass, replace
from typing import Dict, List, Tuple

import numpy as np

from errors import DomainError, ValidationError

logger = logging.getLogger(__name__)

# ϵa 的下限；ϵa = 0 會讓 γout_k = 0
EPS_A_FLOOR = 1e-9
# 浮點比較容差（例如 ϵa = 1 − 1/K 剛好在邊界上）
_SLACK = 1e-12


@dataclass(frozen=True)
class UncertaintyProfile:
    """
    不確定性設定

    預設值為標準比較設定（K=10, Δ=0.2, ϵa=0.5, ϵe=0.25）
    """
    k: int = 10                 # 類別數 K ≥ 2
    delta: float = 0.2          # 相對校準誤差 Δ > −1
    eps_a: float = 0.5          # 偶然不確定性 ϵa ∈ [1e-9, 1−1/K]
    eps_e: float = 0.25         # 知識不確定性 ϵe > 0

    def __post_init__(self):
        self.validate()

    def violations(self) -> List[str]:
        """回傳所有被違反的不等式原文"""
        broken = []
        if not isinstance(self.k, (int, np.integer)) or isinstance(self.k, bool) or self.k < 2:
            broken.append("K≥2")
            return broken
        if not np.isfinite(self.eps_e) or self.eps_e <= 0.0:
            broken.append("ϵe>0")
        if not np.isfinite(self.eps_a) or self.eps_a < EPS_A_FLOOR:
            broken.append("ϵa≥1e-9")
        elif self.eps_a > 1.0 - 1.0 / self.k + _SLACK:
            broken.append("ϵa≤1−1/K")
        if not np.isfinite(self.delta) or self.delta <= -1.0:
            broken.append("Δ>−1")
        elif np.isfinite(self.eps_a) and not self.delta / (1.0 + self.delta) < self.eps_a:
            broken.append("Δ/(1+Δ)<ϵa")
        return broken

    def validate(self) -> None:
        """
        Raises:
            ValidationError: 任一不等式不成立（訊息列出全部）
        """
        broken = self.violations()
        if broken:
            raise ValidationError(
                f"invalid uncertainty profile k={self.k}, delta={self.delta}, "
                f"eps_a={self.eps_a}, eps_e={self.eps_e}",
                inequality=", ".join(broken),
            )

    @property
    def p_star_0(self) -> float:
        """真實標籤的 ground-truth 機率 1 − ϵa"""
        return 1.0 - self.eps_a

    def replace(self, **changes) -> "UncertaintyProfile":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class GroundTruthConfidence:
    """資料分佈下真實標籤的機率 p*₀，1/K ≤ p*₀ ≤ 1"""
    p_star_0: float
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValidationError(f"invalid class count k={self.k}", inequality="K≥2")
        if not (1.0 / self.k - _SLACK <= self.p_star_0 <= 1.0 + _SLACK):
            raise ValidationError(
                f"ground-truth confidence p*0={self.p_star_0} out of range for k={self.k}",
                inequality="1/K≤p*0≤1",
            )

    @classmethod
    def from_profile(cls, profile: UncertaintyProfile) -> "GroundTruthConfidence":
        return cls(p_star_0=profile.p_star_0, k=profile.k)


@dataclass(frozen=True, eq=False)
class DirichletPair:
    """
    Out / In 假設下的 Dirichlet 參數

    Attributes:
        gamma_out: 目標樣本不在訓練集時的參數（長度 K）
        gamma_in: 目標樣本在訓練集時的參數（長度 K）
    """
    gamma_out: np.ndarray
    gamma_in: np.ndarray

    def __post_init__(self):
        for name in ("gamma_out", "gamma_in"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            if arr.ndim != 1 or arr.shape[0] < 2:
                raise ValidationError(f"{name} must be a vector of length >= 2", inequality="K≥2")
            if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
                raise ValidationError(f"{name} has non-positive components: {arr}", inequality="γ>0")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.gamma_out.shape != self.gamma_in.shape:
            raise ValidationError(
                f"gamma_out has {self.gamma_out.shape[0]} components, "
                f"gamma_in has {self.gamma_in.shape[0]}"
            )

    @property
    def k(self) -> int:
        return int(self.gamma_out.shape[0])

    @property
    def sums(self) -> Tuple[float, float]:
        return float(self.gamma_out.sum()), float(self.gamma_in.sum())

    def hypothesis(self, name: str) -> np.ndarray:
        """依假設名稱 ('out' / 'in') 取參數"""
        if name == "out":
            return self.gamma_out
        if name == "in":
            return self.gamma_in
        raise DomainError(f"hypothesis must be 'out' or 'in', got {name!r}")

    def swapped(self) -> "DirichletPair":
        return DirichletPair(gamma_out=self.gamma_in, gamma_in=self.gamma_out)

    def aggregated(self) -> "DirichletPair":
        """真實標籤的 Beta 邊際：(γ_0, Σ_{k≥1} γ_k)"""
        return DirichletPair(
            gamma_out=np.array([self.gamma_out[0], self.gamma_out[1:].sum()]),
            gamma_in=np.array([self.gamma_in[0], self.gamma_in[1:].sum()]),
        )

    def validate_model(self, rel_tol: float = 1e-9) -> None:
        """
        檢查模型假設：兩組參數總和相等，且非真實標籤分量對稱

        Raises:
            ValidationError: 任一假設不成立
        """
        sum_out, sum_in = self.sums
        if abs(sum_out - sum_in) > rel_tol * max(sum_out, sum_in):
            raise ValidationError(
                f"parameter sums differ: {sum_out!r} vs {sum_in!r}",
                inequality="Σγout=Σγin",
            )
        for name in ("gamma_out", "gamma_in"):
            rest = getattr(self, name)[1:]
            if np.ptp(rest) > rel_tol * rest.max():
                raise ValidationError(
                    f"{name} non-true components are not symmetric: {rest}",
                    inequality="γ1=⋯=γK−1",
                )

    def to_dict(self) -> Dict[str, list]:
        return {"gamma_out": self.gamma_out.tolist(), "gamma_in": self.gamma_in.tolist()}


# ============================================================================
# Operations
# ============================================================================

def profile_to_pair(profile: UncertaintyProfile) -> DirichletPair:
    """
    把 (K, Δ, ϵa, ϵe) 轉為 Dirichlet 參數，兩組總和皆為 1/ϵe
    """
    profile.validate()
    k, delta, eps_a, eps_e = profile.k, profile.delta, profile.eps_a, profile.eps_e

    gamma_out = np.empty(k)
    gamma_out[0] = (1.0 - eps_a) / eps_e
    gamma_out[1:] = eps_a / ((k - 1) * eps_e)

    gamma_in = np.empty(k)
    gamma_in[0] = (1.0 + delta) * (1.0 - eps_a) / eps_e
    gamma_in[1:] = (eps_a * delta + eps_a - delta) / ((k - 1) * eps_e)

    return DirichletPair(gamma_out=gamma_out, gamma_in=gamma_in)


def pair_means(pair: DirichletPair) -> Tuple[np.ndarray, np.ndarray]:
    """平均信心向量 γ_k / Σγ（out, in）"""
    return pair.gamma_out / pair.gamma_out.sum(), pair.gamma_in / pair.gamma_in.sum()


def _dirichlet_variance(gamma: np.ndarray) -> np.ndarray:
    total = gamma.sum()
    return gamma * (total - gamma) / (total ** 2 * (total + 1.0))


def pair_variances(pair: DirichletPair) -> Tuple[np.ndarray, np.ndarray]:
    """各分量變異數 γ_k(Σγ−γ_k)/((Σγ)²(Σγ+1))（out, in）"""
    return _dirichlet_variance(pair.gamma_out), _dirichlet_variance(pair.gamma_in)


def infer_profile(pair: DirichletPair, p_star_0: float, rel_tol: float = 1e-9) -> UncertaintyProfile:
    """
    由 Dirichlet 參數與 p*₀ 反推不確定性設定

    ϵe = 1/Σγout，ϵa = 1 − p*₀，Δ = (γin_0/Σγin − p*₀)/p*₀

    Args:
        pair: 滿足模型假設的參數對
        p_star_0: 真實標籤的 ground-truth 機率
        rel_tol: 總和相等的相對容差（擬合結果可放寬）

    Raises:
        ValidationError: 參數對或 p*₀ 不合法，或反推結果違反設定的不等式
    """
    pair.validate_model(rel_tol)
    GroundTruthConfidence(p_star_0=p_star_0, k=pair.k)

    sum_out, sum_in = pair.sums
    eps_e = 1.0 / sum_out
    eps_a = 1.0 - p_star_0
    delta = (pair.gamma_in[0] / sum_in - p_star_0) / p_star_0
    return UncertaintyProfile(k=pair.k, delta=float(delta), eps_a=float(eps_a), eps_e=float(eps_e))


def fitted_pair(gamma_out_hat: np.ndarray, gamma_in_hat: np.ndarray) -> Tuple[DirichletPair, float]:
    """
    把擬合出的兩組參數整理成滿足對稱假設的參數對

    非真實標籤分量以平均值取代（總和不變）。

    Returns:
        (pair, sum_mismatch)：sum_mismatch = |Σout − Σin| / max(Σout, Σin)
    """
    symmetric = []
    for gamma in (gamma_out_hat, gamma_in_hat):
        arr = np.array(gamma, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise ValidationError("fitted parameters must be vectors of length >= 2", inequality="K≥2")
        arr[1:] = arr[1:].mean()
        symmetric.append(arr)
    pair = DirichletPair(gamma_out=symmetric[0], gamma_in=symmetric[1])
    sum_out, sum_in = pair.sums
    mismatch = abs(sum_out - sum_in) / max(sum_out, sum_in)
    if mismatch > 0.05:
        logger.warning(f"[UncertaintyModel] fitted sums differ by {mismatch:.1%} (equal-sum assumption)")
    return pair, float(mismatch)


def empirical_calibration_error(data_in, p_star_0: float) -> float:
    """
    以 in 假設資料估計 Δ = (mean p₀ − p*₀)/p*₀

    Args:
        data_in: ConfidenceDataset 或 (n, K) 陣列
        p_star_0: 真實標籤的 ground-truth 機率
    """
    rows = np.asarray(getattr(data_in, "rows", data_in), dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise ValidationError("calibration error needs a non-empty (n, K) dataset", inequality="n≥1")
    GroundTruthConfidence(p_star_0=p_star_0, k=rows.shape[1])
    return float((rows[:, 0].mean() - p_star_0) / p_star_0)
