"""Seidel (signature) matrices: validation, switching, generators, fixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    BadK,
    BadPrime,
    NonUnimodular,
    NonzeroDiagonal,
    NotHermitian,
    NotReal,
    NotSquare,
    NotThreeModFour,
    TooLarge,
    UnknownFixture,
)
from .linalg import as_matrix, check_hermitian, cluster_values, hermitian_eigen, identity, ones

UNIMODULAR_TOL = 1e-12
MATCH_TOL = 1e-9
MAX_SWITCHING_N = 12


@dataclass(frozen=True, eq=False)
class SeidelMatrix:
    """A validated Seidel matrix; build with :func:`validate`."""

    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def is_real(self, tol: float = UNIMODULAR_TOL) -> bool:
        return bool(np.all(np.abs(self.entries.imag) <= tol))


def validate(q) -> SeidelMatrix:
    """Check Hermitian, zero diagonal and unimodular off-diagonal entries."""
    if isinstance(q, SeidelMatrix):
        return q
    m = as_matrix(q, square=True)
    n = m.shape[0]
    if n < 2:
        raise NotSquare("a Seidel matrix needs n >= 2")
    for i in range(n):
        if m[i, i] != 0:
            raise NonzeroDiagonal(i, complex(m[i, i]))
    check_hermitian(m)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(abs(m[i, j]) - 1.0) > UNIMODULAR_TOL:
                raise NonUnimodular(i, j, complex(m[i, j]))
    # stored exactly Hermitian from here on
    return SeidelMatrix(_hermitize(m))


def _hermitize(m: np.ndarray) -> np.ndarray:
    """Copy the strict upper triangle onto the lower one, zero the diagonal."""
    upper = np.triu(m, 1)
    return upper + upper.conj().T


@dataclass(frozen=True, eq=False)
class SwitchingTransform:
    """Permutation plus unimodular diagonal; maps S to P D S D^-1 P^-1.

    ``apply(S)[i, j] = d[p[i]] * S[p[i], p[j]] * conj(d[p[j]])`` where ``p`` is
    ``permutation`` and ``d`` is ``diagonal``.
    """

    permutation: tuple[int, ...]
    diagonal: np.ndarray

    def __post_init__(self):
        perm = tuple(int(i) for i in self.permutation)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{perm} is not a permutation")
        d = np.array(self.diagonal, dtype=np.complex128)
        if d.shape != (len(perm),):
            raise ValueError("diagonal length must match permutation")
        if np.any(np.abs(np.abs(d) - 1.0) > UNIMODULAR_TOL):
            raise ValueError("diagonal entries must be unimodular")
        d.setflags(write=False)
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "diagonal", d)

    @classmethod
    def identity(cls, n: int) -> "SwitchingTransform":
        return cls(tuple(range(n)), np.ones(n, dtype=np.complex128))

    @property
    def n(self) -> int:
        return len(self.permutation)

    def apply_array(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=np.complex128)
        p = list(self.permutation)
        dp = self.diagonal[p]
        return dp[:, None] * s[np.ix_(p, p)] * dp.conj()[None, :]

    def apply(self, s) -> SeidelMatrix:
        return SeidelMatrix(_hermitize(self.apply_array(np.asarray(s))))

    def inverse(self) -> "SwitchingTransform":
        p = np.array(self.permutation)
        inv = np.empty_like(p)
        inv[p] = np.arange(len(p))
        return SwitchingTransform(tuple(inv), self.diagonal[p].conj())

    def compose(self, other: "SwitchingTransform") -> "SwitchingTransform":
        """Transform equal to applying ``other`` first, then ``self``."""
        p = np.array(self.permutation)
        op = np.array(other.permutation)
        # self(other(S))[i,j] = d[p_i] d'[op[p_i]] S[op[p_i], op[p_j]] conj(...)
        new_perm = op[p]
        new_diag = np.empty(self.n, dtype=np.complex128)
        new_diag[new_perm] = self.diagonal[p] * other.diagonal[new_perm]
        return SwitchingTransform(tuple(new_perm), new_diag)


def standard_form(q) -> tuple[SeidelMatrix, SwitchingTransform]:
    """Switch ``q`` so its first row and column are all ones off the diagonal."""
    q = validate(q)
    d = q.entries[0].copy()
    d[0] = 1.0
    t = SwitchingTransform(tuple(range(q.n)), d)
    out = t.apply_array(q.entries)
    out[0, 1:] = 1.0
    out[1:, 0] = 1.0
    return SeidelMatrix(_hermitize(out)), t


def spectra_match(a, b, tol: float = MATCH_TOL) -> bool:
    ea = hermitian_eigen(a).eigenvalues
    eb = hermitian_eigen(b).eigenvalues
    return bool(np.max(np.abs(ea - eb)) <= tol * (1.0 + np.max(np.abs(ea))))


def _vertex_signatures(m: np.ndarray) -> list[tuple]:
    # triple products q_ab q_bc q_ca are switching invariants attached to vertex a
    n = m.shape[0]
    sigs = []
    for a in range(n):
        others = [b for b in range(n) if b != a]
        prods = []
        for b in others:
            for c in others:
                if b != c:
                    t = m[a, b] * m[b, c] * m[c, a]
                    prods.append((round(t.real, 7) + 0.0, round(t.imag, 7) + 0.0))
        sigs.append(tuple(sorted(prods)))
    return sigs


def switching_equivalent(q, s) -> Optional[SwitchingTransform]:
    """Search for T with ``T.apply(s) == q``; ``None`` when none exists.

    Backtracking assigns rows of ``q`` to rows of ``s`` in order. Once the image
    of row 0 is fixed (with phase 1) every later diagonal phase is forced by the
    first row, so each branch only checks consistency with earlier rows.
    Spectra and per-vertex triple-product multisets prune the search.
    """
    q = validate(q)
    s = validate(s)
    n = q.n
    if s.n != n:
        return None
    if n > MAX_SWITCHING_N:
        raise TooLarge(f"switching search is capped at n = {MAX_SWITCHING_N}, got {n}")
    Q, S = q.entries, s.entries
    if not spectra_match(Q, S):
        return None
    sig_q = _vertex_signatures(Q)
    sig_s = _vertex_signatures(S)
    if sorted(sig_q) != sorted(sig_s):
        return None

    perm = [-1] * n
    diag = np.zeros(n, dtype=np.complex128)
    used = [False] * n

    def consistent(i: int, b: int) -> bool:
        db = diag[b]
        for j in range(i):
            a = perm[j]
            if abs(diag[a] * S[a, b] * db.conjugate() - Q[j, i]) > MATCH_TOL:
                return False
        return True

    def extend(i: int) -> bool:
        if i == n:
            return True
        for b in range(n):
            if used[b] or sig_s[b] != sig_q[i]:
                continue
            if i == 0:
                diag[b] = 1.0
            else:
                diag[b] = Q[0, i].conjugate() * diag[perm[0]] * S[perm[0], b]
            if not consistent(i, b):
                continue
            perm[i] = b
            used[b] = True
            if extend(i + 1):
                return True
            used[b] = False
            perm[i] = -1
        return False

    if not extend(0):
        return None
    return SwitchingTransform(tuple(perm), diag / np.abs(diag))


def trivial_seidel(n: int, k: int) -> SeidelMatrix:
    """J - I for k = 1 and I - J for k = n - 1."""
    if n < 2:
        raise BadK(f"n must be at least 2, got {n}")
    if k == 1:
        return SeidelMatrix(ones(n) - identity(n))
    if k == n - 1:
        return SeidelMatrix(identity(n) - ones(n))
    raise BadK(f"trivial frames have k = 1 or k = n - 1, got k = {k} for n = {n}")


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % p for p in range(2, math.isqrt(q) + 1))


def paley_conference_matrix(q: int) -> np.ndarray:
    """Bordered quadratic-residue skew conference matrix of order q + 1.

    Core entries are chi(t - s) for the quadratic character chi mod q; the
    border row is +1 and the border column -1.
    """
    if not isinstance(q, (int, np.integer)) or not _is_prime(int(q)):
        raise BadPrime(f"{q} is not prime")
    q = int(q)
    if q % 4 != 3:
        raise NotThreeModFour(f"{q} is not 3 mod 4")
    residues = {(x * x) % q for x in range(1, q)}
    chi = np.array([0] + [1 if x in residues else -1 for x in range(1, q)])
    n = q + 1
    a = np.zeros((n, n), dtype=np.int64)
    a[0, 1:] = 1
    a[1:, 0] = -1
    idx = np.arange(q)
    a[1:, 1:] = chi[(idx[None, :] - idx[:, None]) % q]
    if not (np.array_equal(a.T, -a) and np.array_equal(a @ a.T, (n - 1) * np.eye(n, dtype=np.int64))):
        raise AssertionError(f"Paley construction failed for q = {q}")
    return a


def paley_skew_seidel(q: int) -> SeidelMatrix:
    """Q = iA for the Paley skew conference matrix A of order q + 1."""
    return SeidelMatrix(1j * paley_conference_matrix(q).astype(np.complex128))


# ---------------------------------------------------------------- fixtures


@dataclass(frozen=True)
class RootOfUnityGrid:
    """Seidel matrix stored as exponents e with entry exp(2 pi i e / order).

    Diagonal cells hold ``None``.
    """

    order: int
    exponents: tuple[tuple[Optional[int], ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(None if e is None else int(e) % self.order for e in row) for row in self.exponents)
        n = len(rows)
        if self.order < 1 or any(len(r) != n for r in rows):
            raise ValueError("exponent grid must be square with positive order")
        for i in range(n):
            if rows[i][i] is not None:
                raise NonzeroDiagonal(i, complex(np.exp(2j * np.pi * rows[i][i] / self.order)))
            for j in range(n):
                if i != j:
                    if rows[i][j] is None:
                        raise ValueError(f"missing exponent at ({i},{j})")
                    if (rows[i][j] + rows[j][i]) % self.order:
                        raise NotHermitian(f"exponents at ({i},{j}) and ({j},{i}) are not negatives mod {self.order}")
        object.__setattr__(self, "exponents", rows)

    @property
    def n(self) -> int:
        return len(self.exponents)

    def to_matrix(self) -> np.ndarray:
        n = self.n
        m = np.zeros((n, n), dtype=np.complex128)
        for i in range(n):
            for j in range(i + 1, n):
                m[i, j] = root_of_unity(self.exponents[i][j], self.order)
                m[j, i] = m[i, j].conjugate()
        return m

    def to_seidel(self) -> SeidelMatrix:
        return validate(self.to_matrix())

    @classmethod
    def from_matrix(cls, q, order: int, tol: float = 1e-9) -> "RootOfUnityGrid":
        """Recover exponents; raises ValueError if an entry is off the lattice."""
        m = np.asarray(q, dtype=np.complex128)
        n = m.shape[0]
        rows = []
        for i in range(n):
            row: list[Optional[int]] = []
            for j in range(n):
                if i == j:
                    row.append(None)
                    continue
                e = int(round(np.angle(m[i, j]) * order / (2 * np.pi))) % order
                if abs(root_of_unity(e, order) - m[i, j]) > tol:
                    raise ValueError(f"entry ({i},{j}) = {m[i, j]!r} is not an order-{order} root of unity")
                row.append(e)
            rows.append(tuple(row))
        return cls(order, tuple(rows))


_EXACT_UNIT = {0: 1.0 + 0j, 1: 1j, 2: -1.0 + 0j, 3: -1j}


def root_of_unity(e: int, order: int) -> complex:
    """exp(2 pi i e / order), exact at the four axis points."""
    e %= order
    if (4 * e) % order == 0:
        return _EXACT_UNIT[4 * e // order]
    return complex(np.exp(2j * np.pi * e / order))


def _grid_from_symbols(rows: Sequence[str], table: dict[str, int]) -> RootOfUnityGrid:
    out = []
    for r in rows:
        out.append(tuple(None if tok == "0" else table[tok] for tok in r.split()))
    return RootOfUnityGrid(12, tuple(out))


# Order-12 exponents: w = exp(i pi / 3) is 2, w^5 is 10, -1 is 6, i is 3, -i is 9.
_SYMBOLS = {"1": 0, "-1": 6, "w": 2, "w2": 4, "w4": 8, "w5": 10, "i": 3, "-i": 9}

_FIXTURE_ROWS = {
    "bp-9-3-F": [
        "0 1 1 1 1 1 1 1 1",
        "1 0 -1 w5 w5 w5 w w w",
        "1 -1 0 w w w w5 w5 w5",
        "1 w w5 0 w5 w -1 w5 w",
        "1 w w5 w 0 w5 w5 w -1",
        "1 w w5 w5 w 0 w -1 w5",
        "1 w5 w -1 w w5 0 w w5",
        "1 w5 w w w5 -1 w5 0 w",
        "1 w5 w w5 -1 w w w5 0",
    ],
    "bp-9-3-G": [
        "0 1 1 1 1 1 1 1 1",
        "1 0 -1 w5 w5 w5 w w w",
        "1 -1 0 w w w w5 w5 w5",
        "1 w w5 0 w5 w 1 w4 w2",
        "1 w w5 w 0 w5 w2 1 w4",
        "1 w w5 w5 w 0 w4 w2 1",
        "1 w5 w 1 w4 w2 0 w5 w",
        "1 w5 w w2 1 w4 w 0 w5",
        "1 w5 w w4 w2 1 w5 w 0",
    ],
    "skew-4": [
        "0 1 1 1",
        "1 0 -i i",
        "1 i 0 -i",
        "1 -i i 0",
    ],
    "skew-8": [
        "0 1 1 1 1 1 1 1",
        "1 0 -i -i -i i i i",
        "1 i 0 -i i -i -i i",
        "1 i i 0 -i -i i -i",
        "1 i -i i 0 i -i -i",
        "1 -i i i -i 0 -i i",
        "1 -i i -i i i 0 -i",
        "1 -i -i i i -i i 0",
    ],
}

FIXTURE_NAMES = tuple(_FIXTURE_ROWS)


def fixture_grid(name: str) -> RootOfUnityGrid:
    try:
        rows = _FIXTURE_ROWS[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}") from None
    return _grid_from_symbols(rows, _SYMBOLS)


def fixture(name: str) -> SeidelMatrix:
    """The exact Seidel matrices of the (9,3) and skew examples."""
    return fixture_grid(name).to_seidel()


# ------------------------------------------------------------- real graphs


def adjacency_from_real_seidel(q) -> np.ndarray:
    """Graph adjacency A = (Q - I + J) / 2 of a real Seidel matrix."""
    q = validate(q)
    if not q.is_real():
        raise NotReal("adjacency is only defined for real Seidel matrices")
    n = q.n
    a = 0.5 * (q.entries.real - np.eye(n) + np.ones((n, n)))
    return np.rint(a).astype(np.complex128)


def seidel_from_adjacency(a) -> SeidelMatrix:
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    return validate(2 * a + identity(n) - ones(n))


def row_sums(q) -> np.ndarray:
    """Row sums of a Seidel matrix (interesting for standard forms)."""
    return validate(q).entries.sum(axis=1)


def row_sum_check(q) -> list[complex]:
    return [complex(x) for x in row_sums(q)]


def eigenvalue_clusters(q, tol_scale: float = 1e-8) -> list[list[float]]:
    m = np.asarray(q, dtype=np.complex128)
    vals = hermitian_eigen(m).eigenvalues
    norm = float(max(abs(vals[0]), abs(vals[-1])))
    return cluster_values(vals, tol_scale * (1.0 + norm))
