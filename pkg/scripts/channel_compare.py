"""Monte Carlo comparison of the two (9, 3) fixtures on the erasure channel.

Both frames have the same n, k and coherence; only the worst-case erasure
error separates them.

    python3 scripts/channel_compare.py --m 3 --trials 20000 --seed 7
"""

import argparse

from etfkit.channel import SimulationConfig, compare_frames
from etfkit.etf import etf_from_seidel
from etfkit.seidel import fixture

NAMES = ("bp-9-3-F", "bp-9-3-G")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mode", choices=("random", "exhaustive"), default="random")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    frames = [etf_from_seidel(fixture(name))[2] for name in NAMES]
    cfg = SimulationConfig(args.m, args.trials, args.seed, args.mode)
    for rank, r in enumerate(compare_frames(frames, cfg, args.threads), 1):
        res = r.result
        print(f"{rank}. {NAMES[r.index]:<9} empirical max {res.empirical_max_error:.6f}  "
              f"mean {res.empirical_mean_error:.6f}  analytic {res.analytic_e_max:.6f}  "
              f"worst pattern {list(res.worst_pattern)}")


if __name__ == "__main__":
    main()
