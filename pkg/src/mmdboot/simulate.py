"""Artificial populations with controllable size and measurement thresholds."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .biodistance import distance_matrix
from .bootstrap import BootstrapConfig, bootstrap_distance_matrix
from .cluster import topology_equal, upgma
from .diagnostics import rescale_stats
from .stochastic import PURPOSE_SIMULATE, RandomStream, derive_stream
from .trait_data import TraitCounts
from .transform import transform_counts


@dataclass(frozen=True)
class SimConfig:
    """``lambda1`` is the minimum population size, ``lambda2`` the minimum
    number of measurements per trait (capped at the population size)."""

    n_populations: int = 10
    n_traits: int = 13
    max_size: int = 100
    lambda1: int = 50
    lambda2: int = 45
    master_seed: int = 7

    def __post_init__(self):
        if self.n_populations < 2 or self.n_traits < 1 or self.max_size < 1:
            raise ValueError("need >= 2 populations, >= 1 trait, max_size >= 1")
        if not 1 <= self.lambda1 <= self.max_size:
            raise ValueError("lambda1 must lie in [1, max_size]")
        if not 1 <= self.lambda2 <= self.max_size:
            raise ValueError("lambda2 must lie in [1, max_size]")


GOOD_DATA = SimConfig(lambda1=50, lambda2=45)
POOR_DATA = SimConfig(lambda1=2, lambda2=2)


def _uniform_int(stream: RandomStream, lo: int, hi: int) -> int:
    """Uniform integer in the closed range [lo, hi]."""
    return lo + min(int(stream.next_uniform() * (hi - lo + 1)), hi - lo)


def generate(config: SimConfig) -> TraitCounts:
    P, M = config.n_populations, config.n_traits
    sizes = np.zeros(P, dtype=np.int64)
    n = np.zeros((P, M), dtype=np.int64)
    k = np.zeros((P, M), dtype=np.int64)
    for mu in range(P):
        size = _uniform_int(derive_stream(config.master_seed, mu, -1, PURPOSE_SIMULATE), config.lambda1, config.max_size)
        sizes[mu] = size
        floor = min(config.lambda2, size)
        for i in range(M):
            stream = derive_stream(config.master_seed, mu, i, PURPOSE_SIMULATE)
            n[mu, i] = _uniform_int(stream, floor, size)
            k[mu, i] = _uniform_int(stream, 0, int(n[mu, i]))
    return TraitCounts(
        tuple(f"P{mu + 1}" for mu in range(P)), tuple(f"T{i + 1}" for i in range(M)), n, k, sizes
    )


@dataclass(frozen=True)
class StudyResult:
    data_seed: int
    bootstrap_seed: int
    relative_error_pct: float
    topology_preserved: bool


def end_to_end_study(config: SimConfig, iterations: int = 500, seed: int = 42, workers: int = 1) -> StudyResult:
    """Generate data, compare plain and bootstrapped matrices and their UPGMA trees."""
    counts = generate(config)
    plain = distance_matrix(transform_counts(counts))
    boot, _ = bootstrap_distance_matrix(counts, BootstrapConfig(iterations, seed, workers=workers))
    stats = rescale_stats(plain, boot)
    same = topology_equal(upgma(plain), upgma(boot))
    return StudyResult(config.master_seed, seed, stats.relative_error_pct, same)


def replicate_study(config: SimConfig, replicates: int, iterations: int = 500, seed: int = 42, workers: int = 1):
    """Run the study on ``replicates`` datasets with data seeds ``master_seed + r``."""
    return [
        end_to_end_study(replace(config, master_seed=config.master_seed + r), iterations, seed + r, workers)
        for r in range(replicates)
    ]
