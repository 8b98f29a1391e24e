"""
Threshold Sweep Demo - 決策集門檻的隱私 / 效用取捨

對每個門檻 q（T = 0）：
    • 平均集合大小（越小越有用）
    • 模擬的 DS 平均優勢
    • δ × CV 上界
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import numpy as np

from numerics import RngStream
from uncertainty import UncertaintyProfile, profile_to_pair
from bounds import ds_advantage_ub
from lira import DisclosureMode, avg_advantage, default_alphas, set_size_table, simulate_tradeoff

N_MC = 100_000


if __name__ == "__main__":
    profile = UncertaintyProfile()
    pair = profile_to_pair(profile)
    alphas = default_alphas(999)
    q_grid = np.round(np.arange(0.05, 0.55, 0.05), 2)

    print("=" * 70)
    print("Decision-Set Threshold Sweep (T = 0)")
    print("=" * 70)

    sizes = set_size_table(pair, q_grid, [0.0], N_MC, RngStream(42).derive(3))

    print(f"\n{'q':>5} | {'set size':>8} | {'avg adv':>8} | {'bound':>7}")
    print("-" * 70)
    for row in sizes:
        mode = DisclosureMode.ds(row["q"], 0.0)
        curve = simulate_tradeoff(pair, mode, 0, alphas, RngStream(42).derive(2), n_mc=N_MC)
        bound = ds_advantage_ub(profile, 0.0, row["q"])
        print(f"{row['q']:>5.2f} | {row['size_avg']:>8.3f} | {avg_advantage(curve):>8.4f} | {bound.exact:>7.4f}")

    print("\n較大的 q 給出較小的集合，同時改變 out/in 結果分佈的差異")
    print("=" * 70)
