import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etfkit.errors import IndexOutOfRange, NotEtf, NotUnimodular, TooLarge, TooManySubsets
from etfkit.erasure import (
    ErasurePattern,
    FourCVerdict,
    ThreeCVerdict,
    check_3c_classification,
    check_4c_exhaustive,
    classify_uniformity,
    completely_uniform_order,
    erasure_bound,
    erasure_error,
    erasure_error_direct,
    erasure_sweep,
    parallelepiped_volume,
    saturation_witness,
    standard_form_row_sums_ok,
    triple_norm,
    volumes,
)
from etfkit.etf import AnalysisOperator, EtfParameters, etf_from_seidel, is_etf_seidel
from etfkit.linalg import compression, hermitian_eigen, identity, ones
from etfkit.seidel import (
    SwitchingTransform,
    fixture,
    paley_skew_seidel,
    standard_form,
    switching_equivalent,
    trivial_seidel,
)

from conftest import INVENTORY
from oracles import brute_force_e, eigenvalues_charpoly, error_operator_norm

E3_F = 0.6465  # Example value for the first (9,3) frame, quoted to 4 places


def test_pattern_validation():
    assert ErasurePattern(5, (4, 0)).m == 2
    with pytest.raises(IndexOutOfRange):
        ErasurePattern(3, (3,))
    with pytest.raises(IndexOutOfRange):
        ErasurePattern(3, ())
    assert np.array_equal(ErasurePattern(4, (1, 3)).indicator(), [0, 1, 0, 1])


@pytest.mark.parametrize("label", sorted(INVENTORY))
def test_one_and_two_erasures(frames, label):
    p, g, _ = frames[label]
    for s in itertools.combinations(range(p.n), 1):
        assert abs(erasure_error(g, s) - p.k / p.n) <= 1e-12
    r1, r2 = classify_uniformity(g, 2, p)
    assert r1.uniform and r2.uniform
    assert abs(r1.e_max - p.k / p.n) <= 1e-9
    assert abs(r2.e_max - (p.k / p.n + p.c)) <= 1e-9


def test_skew4_three_erasures():
    p, g, v = etf_from_seidel(fixture("skew-4"))
    # k/n + c * sqrt(3) = 1/2 + sqrt(3)/sqrt(12)
    for s in itertools.combinations(range(4), 3):
        assert abs(erasure_error(g, s) - 1.0) <= 1e-12
        assert abs(error_operator_norm(v.entries, s) - 1.0) <= 1e-12


def test_example_3_1_sweep():
    pf, gf, vf = etf_from_seidel(fixture("bp-9-3-F"))
    rf = erasure_sweep(gf, 3, pf)
    assert abs(rf.e_max - E3_F) <= 5e-4
    assert rf.e_max < 2 / 3 - 1e-3
    assert not rf.uniform and not rf.saturated
    assert abs(rf.e_max - brute_force_e(vf.entries, 3)[0]) <= 1e-9
    pg, gg, _ = etf_from_seidel(fixture("bp-9-3-G"))
    rg = erasure_sweep(gg, 3, pg)
    assert abs(rg.e_max - 2 / 3) <= 1e-9 and rg.saturated


def test_skew8_three_uniform_value():
    p, g, v = etf_from_seidel(fixture("skew-8"))
    r = erasure_sweep(g, 3, p)
    expected = 0.5 + math.sqrt(3 / 28)
    hi, lo = brute_force_e(v.entries, 3)
    assert abs(hi - expected) <= 1e-12 and abs(lo - expected) <= 1e-12
    assert r.uniform and abs(r.e_max - expected) <= 1e-9 and abs(r.e_min - expected) <= 1e-9
    assert r.n_subsets == 56


@pytest.mark.parametrize("n", range(3, 10))
def test_trivial_k1_every_m(n):
    p, g, _ = etf_from_seidel(trivial_seidel(n, 1))
    for r in classify_uniformity(g, n, p):
        assert abs(r.e_max - r.m / n) <= 1e-12 and abs(r.e_min - r.m / n) <= 1e-12
        assert abs(r.bound - r.m / n) <= 1e-12 and r.saturated


def test_argmax_lexicographic_ties():
    p, g, _ = etf_from_seidel(fixture("skew-8"))
    r = erasure_sweep(g, 3, p)
    assert r.argmax_subset == (0, 1, 2) and r.argmin_subset == (0, 1, 2)
    p, g, _ = etf_from_seidel(fixture("bp-9-3-G"))
    r = erasure_sweep(g, 3, p)
    # first subset whose compression is switching-equivalent to J - I
    assert r.argmax_subset == saturation_witness(fixture("bp-9-3-G"), 3)


def test_parallel_reports_identical():
    p, g, _ = etf_from_seidel(paley_skew_seidel(11))
    base = erasure_sweep(g, 4, p, threads=1)
    for t in (2, 3, 8):
        assert erasure_sweep(g, 4, p, threads=t) == base


def test_guard():
    g = np.eye(40) * 0.5
    with pytest.raises(TooManySubsets):
        erasure_sweep(g, 20)
    with pytest.raises(IndexOutOfRange):
        erasure_sweep(np.eye(3), 4)


def test_classify_examples():
    p, g, _ = etf_from_seidel(fixture("skew-4"))
    reps = classify_uniformity(g, 4, p)
    assert all(r.uniform for r in reps) and completely_uniform_order(reps) == 4
    p, g, _ = etf_from_seidel(fixture("skew-8"))
    reps = classify_uniformity(g, 4, p)
    assert completely_uniform_order(reps) == 3
    p, g, _ = etf_from_seidel(fixture("bp-9-3-F"))
    reps = classify_uniformity(g, 3, p)
    assert completely_uniform_order(reps) == 2 and reps[2].e_max > reps[2].e_min


def test_bound_examples():
    p93 = EtfParameters.from_nk(9, 3)
    assert abs(erasure_bound(p93, 3) - 2 / 3) <= 1e-15
    assert erasure_bound(p93, 1) == p93.k / p93.n
    assert abs(erasure_bound(EtfParameters.from_nk(4, 2), 3) - (0.5 + 2 / math.sqrt(12))) <= 1e-15


def test_saturation_witness_examples():
    assert saturation_witness(fixture("bp-9-3-G"), 3) is not None
    assert saturation_witness(fixture("bp-9-3-F"), 3) is None
    for m in range(1, 7):
        assert saturation_witness(trivial_seidel(6, 1), m) == tuple(range(m))


def test_witness_compression_is_switched_all_ones():
    q = fixture("bp-9-3-G")
    s = saturation_witness(q, 3)
    assert switching_equivalent(compression(q.entries, s), ones(3) - identity(3)) is not None


def test_triple_norm_examples():
    assert abs(triple_norm(1) - 2) <= 1e-15
    assert abs(triple_norm(1j) - math.sqrt(3)) <= 1e-15
    assert abs(triple_norm(-1j) - math.sqrt(3)) <= 1e-15
    assert abs(triple_norm(-1) - 1) <= 1e-15
    with pytest.raises(NotUnimodular):
        triple_norm(0.5)


def test_triple_norm_matches_charpoly():
    for theta in np.linspace(0, 2 * np.pi, 37):
        a = np.exp(1j * theta)
        m = np.array([[0, 1, 1], [1, 0, a], [1, np.conj(a), 0]])
        assert abs(triple_norm(a) - eigenvalues_charpoly(m)[-1]) <= 1e-9
        assert abs(triple_norm(a) - hermitian_eigen(m).largest) <= 1e-12


def test_triple_norm_strictly_increasing():
    re = np.linspace(-1, 1, 1000)
    vals = [triple_norm(complex(x, math.sqrt(max(0.0, 1 - x * x)))) for x in re]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("label", sorted(INVENTORY))
def test_gram_route_equals_direct_route(frames, label):
    p, g, v = frames[label]
    rng = np.random.default_rng(hash(label) % 2**32)
    for m in range(1, min(4, p.n) + 1):
        for _ in range(5):
            s = tuple(sorted(rng.choice(p.n, m, replace=False)))
            a = erasure_error(g, s)
            assert abs(a - error_operator_norm(v.entries, s)) <= 1e-9
            assert abs(a - erasure_error_direct(v, s)) <= 1e-9


@pytest.mark.parametrize("label", sorted(INVENTORY))
def test_bound_holds(frames, label):
    p, g, _ = frames[label]
    for r in classify_uniformity(g, min(4, p.n), p):
        assert r.e_min <= r.e_max <= r.bound + 1e-9
        assert r.saturated == (saturation_witness(INVENTORY[label], r.m) is not None)


@pytest.mark.parametrize("name", ["bp-9-3-F", "bp-9-3-G", "skew-8"])
@given(data=st.data())
@settings(max_examples=50, deadline=None)
def test_e_max_switching_invariant(name, data):
    base = fixture(name)
    perm = data.draw(st.permutations(list(range(base.n))))
    angles = data.draw(st.lists(st.floats(0, 1), min_size=base.n, max_size=base.n))
    q = SwitchingTransform(perm, np.exp(2j * np.pi * np.array(angles))).apply(base)
    p0, g0, _ = etf_from_seidel(base)
    p1, g1, _ = etf_from_seidel(q)
    assert abs(erasure_sweep(g0, 3, p0).e_max - erasure_sweep(g1, 3, p1).e_max) <= 1e-9


def test_3c_examples():
    assert check_3c_classification(fixture("skew-8")) is ThreeCVerdict.SKEW_CLASS
    assert check_3c_classification(fixture("skew-4")) is ThreeCVerdict.SKEW_CLASS
    assert check_3c_classification(fixture("bp-9-3-F")) is ThreeCVerdict.NOT_3C
    assert check_3c_classification(ones(6) - identity(6)) is ThreeCVerdict.TRIVIAL
    with pytest.raises(NotEtf):
        q = fixture("skew-4").entries.copy()
        q[1, 2], q[2, 1] = 1j, -1j
        check_3c_classification(q)


def test_3c_large_n_uses_entry_pattern():
    # n = 20 is past the switching search cap
    assert check_3c_classification(trivial_seidel(20, 19), cross_check=False) is ThreeCVerdict.TRIVIAL
    assert check_3c_classification(paley_skew_seidel(19), cross_check=False) is ThreeCVerdict.SKEW_CLASS


def test_4c_examples():
    assert check_4c_exhaustive(fixture("skew-4")) is FourCVerdict.FOUR_C
    assert check_4c_exhaustive(fixture("skew-8")) is FourCVerdict.NOT_FOUR_C
    assert check_4c_exhaustive(trivial_seidel(7, 1)) is FourCVerdict.FOUR_C
    with pytest.raises(TooLarge):
        check_4c_exhaustive(trivial_seidel(17, 1))


def test_skew8_has_two_distinct_four_norms():
    p, g, _ = etf_from_seidel(fixture("skew-8"))
    norms = sorted({round(erasure_error(g, s), 9) for s in itertools.combinations(range(8), 4)})
    assert len(norms) >= 2 and norms[-1] - norms[0] > 1e-3


@pytest.mark.parametrize("q", [fixture("skew-4"), fixture("skew-8"), paley_skew_seidel(3),
                               paley_skew_seidel(7), paley_skew_seidel(11)])
def test_skew_standard_form_row_sums(q):
    assert standard_form_row_sums_ok(q)
    s = standard_form(q)[0].entries
    assert np.allclose(s.sum(axis=0)[1:], 1)


def test_volume_examples():
    v = AnalysisOperator(np.eye(3))
    assert abs(parallelepiped_volume(v, (0, 1, 2)) - 1) <= 1e-15
    _, _, v4 = etf_from_seidel(fixture("skew-4"))
    for s in itertools.combinations(range(4), 3):
        assert parallelepiped_volume(v4, s) <= 1e-6
    _, _, v8 = etf_from_seidel(fixture("skew-8"))
    vols = volumes(v8)
    assert len(vols) == 56
    assert np.max(np.abs(vols - math.sqrt(1 / 14))) <= 1e-9


def test_volume_matches_vector_gram():
    _, _, v = etf_from_seidel(fixture("bp-9-3-G"))
    f = v.vectors()
    for s in [(0, 1, 2), (2, 5, 7), (3, 4, 8)]:
        m = f[list(s)]
        direct_sq = np.linalg.det(m.conj() @ m.T).real
        # compare squared volumes: sqrt amplifies rounding near degenerate triples
        assert abs(parallelepiped_volume(v, s) ** 2 - direct_sq) <= 1e-12


WIDE = sorted(label for label, q in INVENTORY.items() if is_etf_seidel(q).k >= 3)


@pytest.mark.parametrize("label", WIDE)
def test_volume_constancy_iff_three_uniform(frames, label):
    p, g, v = frames[label]
    vols = volumes(v)
    constant = float(vols.max() - vols.min()) <= 1e-9
    assert constant == erasure_sweep(g, 3, p).uniform
