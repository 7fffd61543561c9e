"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test appends a ``[PASS]`` / ``[FAIL]`` line to ``RESULTS``; conftest prints
them in the terminal summary.
"""

import io
import itertools
import json
import math
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from conftest import INVENTORY
from oracles import eigenvalues_charpoly, eigenvalues_power, error_operator_norm, random_hermitian
from etfkit.cli import main
from etfkit.erasure import (
    FourCVerdict,
    ThreeCVerdict,
    check_3c_classification,
    check_4c_exhaustive,
    classify_uniformity,
    erasure_bound,
    erasure_error,
    erasure_sweep,
    saturation_witness,
    volumes,
)
from etfkit.etf import check_etf, etf_from_seidel, frame_angle, seidel_from_frame
from etfkit.linalg import hermitian_eigen
from etfkit.seidel import FIXTURE_NAMES, fixture, paley_skew_seidel

RESULTS = []


def record(name, ok, detail):
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, detail


def _sweep(label, m, threads=1):
    p, g, _ = etf_from_seidel(INVENTORY[label])
    return erasure_sweep(g, m, p, threads)


def test_ac1_counterexample_pair():
    t0 = time.perf_counter()
    f = _sweep("bp-9-3-F", 3)
    g = _sweep("bp-9-3-G", 3)
    elapsed = time.perf_counter() - t0
    ok = (abs(f.e_max - 0.6465) <= 5e-4 and f.e_max < 2 / 3 - 1e-3
          and abs(g.e_max - 2 / 3) <= 1e-9 and g.saturated and elapsed < 1.0)
    record("AC1 bp-9-3 F/G e_3", ok,
           f"F={f.e_max:.6f} G={g.e_max:.12f} saturated(G)={g.saturated} t={elapsed:.3f}s")


def test_ac2_skew_uniformity():
    details, ok = [], True
    for label in ("skew-4", "skew-8"):
        p, g, _ = etf_from_seidel(INVENTORY[label])
        gaps = [r.e_max - r.e_min for r in classify_uniformity(g, 3, p)]
        ok &= max(gaps) <= 1e-9
        details.append(f"{label} max gap m<=3 {max(gaps):.1e}")
    r4 = _sweep("skew-8", 4)
    spread = r4.e_max - r4.e_min
    ok &= spread > 1e-3
    details.append(f"skew-8 m=4 norms {r4.e_min:.6f}..{r4.e_max:.6f}")
    record("AC2 skew 3_c-uniform, skew-8 not 4-uniform", ok, "; ".join(details))


def test_ac3_parameter_algebra():
    worst = 0.0
    for q in INVENTORY.values():
        p = check_etf(q).params
        n, k = p.n, p.k
        lam1 = -math.sqrt(k * (n - 1) / (n - k))
        lam2 = math.sqrt((n - 1) * (n - k) / k)
        k_closed = n / 2 - p.mu * n / (2 * math.sqrt(4 * (n - 1) + p.mu ** 2))
        worst = max(worst,
                    abs(p.mu - (p.lambda1 + p.lambda2)),
                    abs(n - (1 - p.lambda1 * p.lambda2)),
                    abs(p.lambda1 - lam1), abs(p.lambda2 - lam2),
                    abs(k - k_closed))
    c93 = frame_angle(9, 3)
    ok = worst <= 1e-9 and abs(c93 - 1 / 6) <= 1e-12
    record("AC3 parameter identities", ok,
           f"{len(INVENTORY)} matrices, worst residual {worst:.1e}, c_9,3-1/6={c93 - 1 / 6:.1e}")


def test_ac4_bound_and_saturation():
    cases, bad = 0, []
    for label, q in INVENTORY.items():
        p, g, _ = etf_from_seidel(q)
        for m in range(1, min(4, q.n) + 1):
            r = erasure_sweep(g, m, p)
            cases += 1
            if r.e_max > erasure_bound(p, m) + 1e-9:
                bad.append(f"{label} m={m} exceeds bound")
            if r.saturated != (saturation_witness(q, m) is not None):
                bad.append(f"{label} m={m} saturation mismatch")
    record("AC4 erasure bound and saturation", not bad,
           f"{cases} cases" + (f", failures: {bad}" if bad else ", all within bound"))


def test_ac5_gram_frame_recovery():
    labels = list(FIXTURE_NAMES) + [f"paley-{q + 1}" for q in (3, 7, 11)]
    worst = 0.0
    for label in labels:
        q = INVENTORY[label]
        p, g, v = etf_from_seidel(q)
        vv = v.entries.conj().T @ v.entries
        worst = max(worst,
                    np.abs(g @ g - g).max(),
                    abs(np.trace(g).real - p.k),
                    np.abs(vv - np.eye(p.k)).max(),
                    np.abs(seidel_from_frame(v) - q.entries).max())
    record("AC5 Gram / frame recovery", worst <= 1e-8, f"{len(labels)} matrices, worst residual {worst:.1e}")


def test_ac6_oracle_equivalence():
    rng = np.random.default_rng(20260601)
    labels = list(FIXTURE_NAMES)
    worst_e = 0.0
    for _ in range(200):
        label = labels[rng.integers(len(labels))]
        _, g, v = etf_from_seidel(INVENTORY[label])
        m = int(rng.integers(1, v.n + 1))
        pattern = sorted(rng.choice(v.n, size=m, replace=False).tolist())
        worst_e = max(worst_e, abs(erasure_error(g, pattern) - error_operator_norm(v.entries, pattern)))
    worst_eig = 0.0
    for _ in range(100):
        a = random_hermitian(rng, int(rng.integers(1, 9)))
        ours = hermitian_eigen(a).eigenvalues
        worst_eig = max(worst_eig,
                        np.abs(ours - eigenvalues_charpoly(a)).max(),
                        np.abs(ours - eigenvalues_power(a)).max())
    ok = worst_e <= 1e-9 and worst_eig <= 1e-8
    record("AC6 oracle equivalence", ok,
           f"erasure worst {worst_e:.1e} (200 pairs), eigensolver worst {worst_eig:.1e} (100 matrices)")


def test_ac7_four_c_inventory():
    labels = (["skew-4", "skew-8", "paley-12", "bp-9-3-F", "bp-9-3-G"]
              + [f"trivial-{n}-{k}" for n in range(3, 10) for k in (1, n - 1)])
    bad, four_c = [], []
    for label in labels:
        q = INVENTORY[label]
        p, g, _ = etf_from_seidel(q)
        three = check_3c_classification(q, cross_check=False)
        four = check_4c_exhaustive(q)
        if four is FourCVerdict.FOUR_C:
            four_c.append(label)
            if not (label.startswith("trivial") or label == "skew-4"):
                bad.append(f"{label} four_c")
        uniform3 = all(r.uniform for r in classify_uniformity(g, 3, p))
        if uniform3 != (three is not ThreeCVerdict.NOT_3C):
            bad.append(f"{label} 3_c verdict {three.value} vs sweep {uniform3}")
    record("AC7 four_c only for trivial and skew-4", not bad,
           f"{len(labels)} matrices, four_c: {len(four_c)}" + (f", failures: {bad}" if bad else ""))


def _cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def test_ac8_channel_simulation():
    base = ["simulate", "--fixture", "skew-4", "--m", "3", "--trials", "10000", "--seed", "1"]
    outs = {}
    for t in (1, 2, 8):
        code, text = _cli(base + ["--threads", str(t)])
        assert code == 0
        outs[t] = text
    p = json.loads(outs[1])["payload"]
    identical = outs[1] == outs[2] == outs[8]
    ok = (0.95 <= p["empirical_max_error"] <= 1.0 + 1e-9
          and abs(p["analytic_e_max"] - 1.0) <= 1e-9 and identical)
    record("AC8 channel simulation", ok,
           f"empirical_max={p['empirical_max_error']:.6f} analytic={p['analytic_e_max']:.12f} "
           f"identical at 1/2/8 threads={identical}")


def test_ac9_volumes():
    vs8 = volumes(etf_from_seidel(INVENTORY["skew-8"])[2])
    vsf = volumes(etf_from_seidel(INVENTORY["bp-9-3-F"])[2])
    dev = np.abs(vs8 - math.sqrt(1 / 14)).max()
    spread = vsf.max() - vsf.min()
    ok = len(vs8) == 56 and dev <= 1e-9 and spread > 1e-3
    record("AC9 parallelepiped volumes", ok,
           f"skew-8 {len(vs8)} volumes, max dev from sqrt(1/14) {dev:.1e}; bp-9-3-F spread {spread:.4f}")
