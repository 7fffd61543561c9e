"""Print e_max, e_min, the bound and the saturation flag for the built-in
matrices and small Paley frames, for m = 1..max_m.

    python3 scripts/erasure_table.py --max-m 4
"""

import argparse

from etfkit.erasure import classify_uniformity, completely_uniform_order
from etfkit.etf import etf_from_seidel
from etfkit.seidel import FIXTURE_NAMES, fixture, paley_skew_seidel


def inventory():
    for name in FIXTURE_NAMES:
        yield name, fixture(name)
    for q in (3, 7, 11):
        yield f"paley-{q + 1}", paley_skew_seidel(q)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-m", type=int, default=4)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print(f"{'matrix':<10} {'n':>3} {'k':>3} {'m':>3} {'e_max':>10} {'e_min':>10} {'bound':>10}  flags")
    for label, q in inventory():
        p, g, _ = etf_from_seidel(q)
        reports = classify_uniformity(g, min(args.max_m, q.n), p, args.threads)
        for r in reports:
            flags = " ".join(f for f, on in (("uniform", r.uniform), ("saturated", r.saturated)) if on)
            print(f"{label:<10} {p.n:>3} {p.k:>3} {r.m:>3} {r.e_max:>10.6f} {r.e_min:>10.6f} {r.bound:>10.6f}  {flags}")
        print(f"{'':<10} completely uniform up to m = {completely_uniform_order(reports)}")


if __name__ == "__main__":
    main()
