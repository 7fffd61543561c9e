"""Dense complex matrix helpers and a cyclic Jacobi Hermitian eigensolver.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Everything here is
sized for the small (n <= 32) problems that appear in erasure analysis, where
a few Jacobi sweeps are cheap and give eigenvalues accurate to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    ConvergenceError,
    DuplicateIndex,
    IndexOutOfRange,
    NonFinite,
    NotHermitian,
    NotSquare,
)

HERMITIAN_RTOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex128 array (always a fresh copy)."""
    m = np.array(a, dtype=np.complex128, copy=True)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise NotSquare(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix contains NaN or Inf entries")
    if square and m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def ones(n: int) -> np.ndarray:
    """The all-ones matrix J_n."""
    return np.ones((n, n), dtype=np.complex128)


def hermitian_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def check_hermitian(a: np.ndarray, rtol: float = HERMITIAN_RTOL) -> None:
    scale = float(np.max(np.abs(a)))
    defect = hermitian_defect(a)
    if defect > rtol * scale or (scale == 0.0 and defect > 0.0):
        raise NotHermitian(f"max |A - A*| = {defect:.3e} exceeds {rtol:g} * max|A|")


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted ascending, optionally with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def largest(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def smallest(self) -> float:
        return float(self.eigenvalues[0])


def _jacobi(a: np.ndarray, want_vectors: bool):
    n = a.shape[0]
    v = identity(n) if want_vectors else None
    if n == 1:
        return a.real.diagonal().copy(), v

    scale = np.linalg.norm(a)
    threshold = JACOBI_TOL * scale
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= threshold:
            return a.real.diagonal().copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mod = abs(apq)
                if mod <= 1e-300:
                    continue
                phase = apq / mod
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mod)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] zeroes a[p, q]
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ u
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = u.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if v is not None:
                    vc = v[:, [p, q]] @ u
                    v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
    raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")


def hermitian_eigen(a, want_vectors: bool = False) -> Spectrum:
    """Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.

    Eigenvalues come back sorted ascending. With ``want_vectors`` the columns of
    ``Spectrum.eigenvectors`` are the matching orthonormal eigenvectors. The
    sweep order is fixed, so identical input gives bit-identical output.
    """
    m = as_matrix(a, square=True)
    check_hermitian(m)
    # symmetrize so rounding in the input cannot bias the rotations
    m = 0.5 * (m + m.conj().T)
    vals, vecs = _jacobi(m, want_vectors)
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    if vecs is not None:
        vecs = vecs[:, order]
    return Spectrum(vals, vecs)


def largest_eigenvalue(a) -> float:
    return hermitian_eigen(a).largest


def cluster_values(values: Iterable[float], tol: float) -> list[list[float]]:
    """Group sorted values into runs whose neighbours differ by at most ``tol``."""
    groups: list[list[float]] = []
    for x in sorted(values):
        if groups and x - groups[-1][-1] <= tol:
            groups[-1].append(x)
        else:
            groups.append([x])
    return groups


def compression(a, subset: Sequence[int]) -> np.ndarray:
    """Principal submatrix of ``a`` on ``subset`` (order of ``subset`` kept)."""
    m = as_matrix(a, square=True)
    idx = [int(i) for i in subset]
    n = m.shape[0]
    if not idx:
        raise IndexOutOfRange("empty subset")
    for i in idx:
        if not 0 <= i < n:
            raise IndexOutOfRange(f"index {i} outside 0..{n - 1}")
    if len(set(idx)) != len(idx):
        raise DuplicateIndex(f"subset {idx} repeats an index")
    return m[np.ix_(idx, idx)]


def operator_norm(a) -> float:
    """Spectral norm: max |eigenvalue| if Hermitian, else the top singular value."""
    m = as_matrix(a)
    if m.shape[0] == m.shape[1]:
        scale = float(np.max(np.abs(m)))
        if hermitian_defect(m) <= HERMITIAN_RTOL * scale:
            vals = hermitian_eigen(m).eigenvalues
            return float(max(abs(vals[0]), abs(vals[-1])))
    gram = m.conj().T @ m
    return float(np.sqrt(max(hermitian_eigen(gram).largest, 0.0)))


def determinant(a) -> complex:
    """Determinant by Gaussian elimination with partial pivoting."""
    m = as_matrix(a, square=True)
    n = m.shape[0]
    det = 1.0 + 0.0j
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(m[col:, col])))
        if m[pivot, col] == 0:
            return 0.0j
        if pivot != col:
            m[[col, pivot]] = m[[pivot, col]]
            det = -det
        det *= m[col, col]
        factors = m[col + 1 :, col] / m[col, col]
        m[col + 1 :, col:] -= np.outer(factors, m[col, col:])
    return complex(det)
