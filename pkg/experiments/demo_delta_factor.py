"""
Delta Factor Demo - 決策集收縮係數 δ_{T,q}

列出不同溫度與門檻下的 δ_{T,q}，以及對應的 DS 優勢上界 δ × CV。
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from uncertainty import UncertaintyProfile
from bounds import cv_advantage_ub, delta_factor

TEMPERATURES = [1e-4, 0.02, 0.05, 0.1, 0.2]
Q_GRID = [0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0]


def print_grid(k: int):
    print(f"\nK = {k}")
    print(f"{'T':>8} | " + " ".join(f"q={q:<4g}" for q in Q_GRID))
    print("-" * 70)
    for temperature in TEMPERATURES:
        values = [delta_factor(temperature, q, k) for q in Q_GRID]
        print(f"{temperature:>8g} | " + " ".join(f"{v:6.3f}" for v in values))


if __name__ == "__main__":
    print("=" * 70)
    print("Decision-Set Contraction Factor")
    print("=" * 70)

    start = time.time()
    for k in (2, 4):
        print_grid(k)
    print(f"\n計算時間: {time.time() - start:.1f}s")

    profile = UncertaintyProfile()
    cv = cv_advantage_ub(profile)
    print(f"\nCV bound (K=10, Δ=0.2, ϵa=0.5, ϵe=0.25): {cv.exact:.4f}")
    print(f"{'T':>8} | {'δ(q=0.2)':>9} | {'DS bound':>9}")
    print("-" * 70)
    for temperature in TEMPERATURES:
        factor = delta_factor(temperature, 0.2, profile.k)
        print(f"{temperature:>8g} | {factor:>9.4f} | {factor * cv.exact:>9.4f}")
    print("=" * 70)
