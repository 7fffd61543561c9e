"""3_c / 4_c classification of every small ETF Seidel matrix we can build:
trivial frames, Paley skew frames and the built-in fixtures.

    python3 scripts/uniformity_survey.py --max-n 9
"""

import argparse
import time

from etfkit.erasure import ThreeCVerdict, check_3c_classification, check_4c_exhaustive, standard_form_row_sums_ok
from etfkit.etf import check_etf
from etfkit.seidel import FIXTURE_NAMES, fixture, paley_skew_seidel, trivial_seidel


def candidates(max_n):
    for n in range(3, max_n + 1):
        yield f"trivial-{n}-1", trivial_seidel(n, 1)
        yield f"trivial-{n}-{n - 1}", trivial_seidel(n, n - 1)
    for q in (3, 7, 11):
        yield f"paley-{q + 1}", paley_skew_seidel(q)
    for name in FIXTURE_NAMES:
        yield name, fixture(name)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=9, help="largest n for trivial frames")
    args = ap.parse_args()

    print(f"{'matrix':<14} {'n':>3} {'k':>3}  {'3_c':<11} {'4_c':<11} row sums  time")
    for label, q in candidates(args.max_n):
        t0 = time.perf_counter()
        p = check_etf(q).params
        three = check_3c_classification(q)
        four = check_4c_exhaustive(q)
        rows = standard_form_row_sums_ok(q) if three is ThreeCVerdict.SKEW_CLASS else None
        dt = time.perf_counter() - t0
        print(f"{label:<14} {p.n:>3} {p.k:>3}  {three.value:<11} {four.value:<11} {str(rows):<9} {dt:.2f}s")


if __name__ == "__main__":
    main()
