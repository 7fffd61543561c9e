"""ETF verification, parameter algebra, Gram projections and frame recovery."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NonIntegralK, NotEtf, NotParseval, NotProjection, RankMismatch
from .linalg import as_matrix, cluster_values, hermitian_eigen, identity
from .seidel import validate

K_ROUND_TOL = 1e-6
PARSEVAL_TOL = 1e-9
GRAM_TOL = 1e-8
CLUSTER_RTOL = 1e-8


def frame_angle(n: int, k: int) -> float:
    """Common coherence sqrt(k (n - k) / (n^2 (n - 1))) of an (n, k) ETF."""
    return math.sqrt(k * (n - k) / (n * n * (n - 1)))


def k_from_n_mu(n: int, mu: float) -> float:
    return n / 2 - mu * n / (2 * math.sqrt(4 * (n - 1) + mu * mu))


def eigenvalues_from_nk(n: int, k: int) -> tuple[float, float]:
    lam1 = -math.sqrt(k * (n - 1) / (n - k))
    lam2 = math.sqrt((n - 1) * (n - k) / k)
    return lam1, lam2


def mu_from_nk(n: int, k: int) -> float:
    return (n - 2 * k) * math.sqrt((n - 1) / (k * (n - k)))


@dataclass(frozen=True)
class EtfParameters:
    """Parameters (n, k, mu, lambda1, lambda2, c) of an (n, k) ETF.

    ``lambda1 < 0 < lambda2`` are the two Seidel eigenvalues, ``mu`` their sum
    and ``c`` the frame angle. ``from_nk`` fills them from closed forms; the
    values returned by :func:`is_etf_seidel` are the measured eigenvalues.
    """

    n: int
    k: int
    mu: float
    lambda1: float
    lambda2: float
    c: float

    @classmethod
    def from_nk(cls, n: int, k: int) -> "EtfParameters":
        if not 1 <= k <= n - 1:
            raise NonIntegralK(f"k = {k} outside 1..{n - 1}")
        lam1, lam2 = eigenvalues_from_nk(n, k)
        return cls(n, k, mu_from_nk(n, k), lam1, lam2, frame_angle(n, k))

    @property
    def ratio(self) -> float:
        """k / n, the squared norm of every frame vector."""
        return self.k / self.n

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "mu": self.mu, "lambda1": self.lambda1,
                "lambda2": self.lambda2, "c": self.c}


def _round_k(n: int, k_raw: float) -> int:
    k = round(k_raw)
    if abs(k - k_raw) > K_ROUND_TOL or not 1 <= k <= n - 1:
        raise NonIntegralK(f"n = {n} gives k = {k_raw!r}, not an integer in 1..{n - 1}")
    return int(k)


def params_from_n_mu(n: int, mu: float) -> EtfParameters:
    if n < 2:
        raise NonIntegralK(f"n must be at least 2, got {n}")
    k = _round_k(n, k_from_n_mu(n, mu))
    p = EtfParameters.from_nk(n, k)
    return EtfParameters(n, k, float(mu), p.lambda1, p.lambda2, p.c)


def quadratic_residual(q, mu: float) -> float:
    """Frobenius norm of Q^2 - (n - 1) I - mu Q."""
    m = np.asarray(q, dtype=np.complex128)
    n = m.shape[0]
    return float(np.linalg.norm(m @ m - (n - 1) * identity(n) - mu * m))


@dataclass(frozen=True)
class EtfCheck:
    params: Optional[EtfParameters]
    residual: float
    clusters: int


def check_etf(q) -> EtfCheck:
    """Run the two-eigenvalue test and report the quadratic residual as well."""
    q = validate(q)
    n = q.n
    vals = hermitian_eigen(q.entries).eigenvalues
    norm = max(abs(vals[0]), abs(vals[-1]))
    groups = cluster_values(vals, CLUSTER_RTOL * (1.0 + norm))
    if len(groups) != 2:
        return EtfCheck(None, float("nan"), len(groups))
    lam1 = float(np.mean(groups[0]))
    lam2 = float(np.mean(groups[1]))
    mu = lam1 + lam2
    residual = quadratic_residual(q.entries, mu)
    if not (lam1 < 0 < lam2) or residual > 1e-8 * n:
        return EtfCheck(None, residual, 2)
    try:
        k = _round_k(n, k_from_n_mu(n, mu))
    except NonIntegralK:
        return EtfCheck(None, residual, 2)
    return EtfCheck(EtfParameters(n, k, mu, lam1, lam2, frame_angle(n, k)), residual, 2)


def is_etf_seidel(q) -> Optional[EtfParameters]:
    """ETF parameters when ``q`` has exactly two eigenvalues, else ``None``."""
    return check_etf(q).params


def gram_from_seidel(q, p: EtfParameters) -> np.ndarray:
    """The Gram projection (k/n) I + c Q, checked for idempotency and trace k."""
    q = validate(q)
    g = p.ratio * identity(q.n) + p.c * q.entries
    err = float(np.max(np.abs(g @ g - g)))
    if err > GRAM_TOL:
        raise NotProjection(f"|G^2 - G| = {err:.3e}; parameters do not match Q")
    if abs(np.trace(g).real - p.k) > GRAM_TOL:
        raise NotProjection(f"trace(G) = {np.trace(g).real!r} != k = {p.k}")
    return g


@dataclass(frozen=True, eq=False)
class AnalysisOperator:
    """n x k analysis operator of a Parseval frame; row i is f_i^*."""

    entries: np.ndarray

    def __post_init__(self):
        v = as_matrix(self.entries)
        n, k = v.shape
        if k > n:
            raise NotParseval(f"{n} vectors cannot form a Parseval frame for dimension {k}")
        err = float(np.max(np.abs(v.conj().T @ v - identity(k))))
        if err > PARSEVAL_TOL:
            raise NotParseval(f"|V*V - I| = {err:.3e}")
        norms = np.linalg.norm(v, axis=1)
        if np.max(np.abs(norms - math.sqrt(k / n))) > PARSEVAL_TOL:
            raise NotParseval("rows do not all have norm sqrt(k/n)")
        v.setflags(write=False)
        object.__setattr__(self, "entries", v)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    def vectors(self) -> np.ndarray:
        """Frame vectors f_i as the rows of the returned array."""
        return self.entries.conj()

    def gram(self) -> np.ndarray:
        return self.entries @ self.entries.conj().T


def _orthonormalize(cols: np.ndarray) -> np.ndarray:
    out = np.array(cols, dtype=np.complex128)
    for j in range(out.shape[1]):
        for _ in range(2):
            for i in range(j):
                out[:, j] -= (out[:, i].conj() @ out[:, j]) * out[:, i]
        out[:, j] /= np.linalg.norm(out[:, j])
    return out


def frame_from_seidel(q, p: EtfParameters) -> AnalysisOperator:
    """Analysis operator from the eigenvalue-1 eigenvectors of the Gram projection."""
    g = gram_from_seidel(q, p)
    spec = hermitian_eigen(g, want_vectors=True)
    ones_mask = np.abs(spec.eigenvalues - 1.0) <= 2 * CLUSTER_RTOL
    if int(ones_mask.sum()) != p.k:
        raise RankMismatch(f"Gram has {int(ones_mask.sum())} unit eigenvalues, expected k = {p.k}")
    v = _orthonormalize(spec.eigenvectors[:, ones_mask])
    return AnalysisOperator(v)


def seidel_from_frame(v: AnalysisOperator) -> np.ndarray:
    """Q = (V V^* - (k/n) I) / c, the inverse of the Gram relation."""
    n, k = v.n, v.k
    return (v.gram() - (k / n) * identity(n)) / frame_angle(n, k)


def mutual_coherence(v: AnalysisOperator) -> tuple[float, float]:
    """(min, max) of |<f_j, f_i>| over i != j."""
    g = np.abs(v.gram())
    off = g[~np.eye(v.n, dtype=bool)]
    if off.size == 0:
        return 0.0, 0.0
    return float(off.min()), float(off.max())


def etf_from_seidel(q) -> tuple[EtfParameters, np.ndarray, AnalysisOperator]:
    """Verify, then build Gram and frame. Raises NotEtf otherwise."""
    q = validate(q)
    p = is_etf_seidel(q)
    if p is None:
        raise NotEtf("Seidel matrix does not have exactly two eigenvalues")
    g = gram_from_seidel(q, p)
    return p, g, frame_from_seidel(q, p)
