"""Monte Carlo run of the encode / erase / decode channel x -> V*EVx.

Each trial draws its own generator keyed by (seed, trial index), so results
do not depend on how trials are split across threads.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .erasure import erasure_sweep
from .errors import BadConfig, MixedSizes
from .etf import AnalysisOperator

MODES = ("random", "exhaustive")
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SimulationConfig:
    m: int
    trials: int
    seed: int = 0
    pattern_mode: str = "random"

    def __post_init__(self):
        if not isinstance(self.trials, int) or self.trials < 1:
            raise BadConfig(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise BadConfig(f"m must be a positive integer, got {self.m!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MAX_SEED:
            raise BadConfig(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.pattern_mode not in MODES:
            raise BadConfig(f"pattern_mode must be one of {MODES}, got {self.pattern_mode!r}")

    def check_for(self, n: int) -> None:
        if self.m > n:
            raise BadConfig(f"cannot erase m = {self.m} of n = {n} coordinates")


@dataclass(frozen=True)
class SimulationResult:
    empirical_max_error: float
    empirical_mean_error: float
    analytic_e_max: float
    trials_run: int
    worst_pattern: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "empirical_max_error": self.empirical_max_error,
            "empirical_mean_error": self.empirical_mean_error,
            "analytic_e_max": self.analytic_e_max,
            "trials_run": self.trials_run,
            "worst_pattern": list(self.worst_pattern),
        }


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream for one trial (Philox keyed by seed and index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial])))


def random_unit_vector(rng: np.random.Generator, k: int) -> np.ndarray:
    """Uniform on the complex unit sphere in k dimensions."""
    z = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return z / np.linalg.norm(z)


def unrank_combination(rank: int, n: int, m: int) -> tuple[int, ...]:
    """The rank-th m-subset of range(n) in lexicographic order."""
    out = []
    x = 0
    for remaining in range(m, 0, -1):
        while True:
            count = math.comb(n - x - 1, remaining - 1)
            if rank < count:
                break
            rank -= count
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def transmit(v: AnalysisOperator, x: np.ndarray, erased: Sequence[int]) -> np.ndarray:
    """Encode x, zero the erased coordinates, decode with V^*."""
    y = v.entries @ x
    y[list(erased)] = 0.0
    return v.entries.conj().T @ y


def _run_trial(v: AnalysisOperator, cfg: SimulationConfig, t: int, n_patterns: int):
    rng = trial_rng(cfg.seed, t)
    x = random_unit_vector(rng, v.k)
    if cfg.pattern_mode == "random":
        erased = tuple(sorted(int(i) for i in rng.choice(v.n, size=cfg.m, replace=False)))
    else:
        erased = unrank_combination(t % n_patterns, v.n, cfg.m)
    return float(np.linalg.norm(x - transmit(v, x, erased))), erased


def simulate(v: AnalysisOperator, cfg: SimulationConfig, threads: int = 1) -> SimulationResult:
    cfg.check_for(v.n)
    n_patterns = math.comb(v.n, cfg.m)

    def block(rng_range):
        return [_run_trial(v, cfg, t, n_patterns) for t in rng_range]

    size = max(1, math.ceil(cfg.trials / max(threads, 1)))
    ranges = [range(s, min(s + size, cfg.trials)) for s in range(0, cfg.trials, size)]
    if threads <= 1 or len(ranges) == 1:
        results = block(range(cfg.trials))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(itertools.chain.from_iterable(pool.map(block, ranges)))

    errors = np.array([e for e, _ in results])
    worst = int(np.argmax(errors))
    analytic = erasure_sweep(v.gram(), cfg.m).e_max
    return SimulationResult(
        empirical_max_error=float(errors[worst]),
        empirical_mean_error=float(math.fsum(errors) / len(errors)),
        analytic_e_max=analytic,
        trials_run=cfg.trials,
        worst_pattern=results[worst][1],
    )


@dataclass(frozen=True)
class RankedResult:
    index: int
    result: SimulationResult


def compare_frames(frames: Sequence[AnalysisOperator], cfg: SimulationConfig,
                   threads: int = 1) -> list[RankedResult]:
    """Simulate every frame; best (smallest empirical max error) first."""
    if not frames:
        raise BadConfig("no frames to compare")
    sizes = {f.n for f in frames}
    if len(sizes) != 1:
        raise MixedSizes(f"frames have differing n: {sorted(sizes)}")
    ranked = [RankedResult(i, simulate(f, cfg, threads)) for i, f in enumerate(frames)]
    ranked.sort(key=lambda r: (r.result.empirical_max_error, r.result.analytic_e_max, r.index))
    return ranked
