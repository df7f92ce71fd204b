"""Parametric bootstrap of the per-trait standard deviations.

For every population/trait cell with ``n`` measurements, ``n`` deviates are
drawn from N(0, sigma) and their sample standard deviation is taken; this is
repeated ``B`` times and the bootstrapped sigma is the standard deviation of
those ``B`` values.  Each cell draws from its own derived stream.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .biodistance import DistanceMatrix, MatrixKind, distance_matrix
from .stochastic import PURPOSE_BOOTSTRAP, RandomStream, derive_stream
from .trait_data import TraitCounts
from .transform import SigmaKind, ThetaTable, transform_counts

DEFAULT_ITERATIONS = 500


class SmallNPolicy(str, enum.Enum):
    ERROR = "error"
    SKIP_TRAIT = "skip_trait"


@dataclass(frozen=True)
class BootstrapConfig:
    iterations: int = DEFAULT_ITERATIONS
    master_seed: int = 42
    small_n_policy: SmallNPolicy = SmallNPolicy.SKIP_TRAIT
    keep_replicates: bool = False
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "small_n_policy", SmallNPolicy(self.small_n_policy))
        if self.iterations < 2:
            raise ValueError(f"iterations must be >= 2, got {self.iterations}")


@dataclass
class BootstrapReport:
    frak_s: np.ndarray
    flagged_cells: list[tuple[int, int]] = field(default_factory=list)
    # (mu, i) -> B sigma* values, only with keep_replicates
    sigma_star_sets: dict[tuple[int, int], np.ndarray] | None = None


class SmallSampleError(ValueError):
    pass


def sigma_star_replicates(sigma: float, n: int, iterations: int, stream: RandomStream) -> np.ndarray:
    """``iterations`` sample standard deviations of ``n`` draws from N(0, sigma).

    Draws are consumed sample-within-replicate, replicate by replicate.
    """
    if n < 2:
        raise SmallSampleError(f"need n >= 2 to estimate a standard deviation, got {n}")
    draws = stream.gaussians(iterations * n, 0.0, sigma).reshape(iterations, n)
    return draws.std(axis=1, ddof=1)


def sigma_star(sigma: float, n: int, stream: RandomStream) -> float:
    return float(sigma_star_replicates(sigma, n, 1, stream)[0])


def frak_sigma(sigma: float, n: int, iterations: int, stream: RandomStream) -> float:
    """Bootstrapped sigma: spread (divisor B - 1) of ``iterations`` sigma* values."""
    if iterations < 2:
        raise ValueError(f"need at least 2 iterations, got {iterations}")
    return float(sigma_star_replicates(sigma, n, iterations, stream).std(ddof=1))


def resolve_workers(workers: int | None) -> int:
    """``None`` reads ``MMD_THREADS``; 0 means one worker per CPU."""
    if workers is None:
        workers = int(os.environ.get("MMD_THREADS", "1") or 1)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def bootstrap_table(table: ThetaTable, config: BootstrapConfig) -> tuple[ThetaTable, BootstrapReport]:
    """Replace every analytic sigma by its bootstrapped value."""
    if table.sigma_kind is not SigmaKind.ANALYTIC:
        raise ValueError("bootstrap needs a table with analytic sigmas")
    P, M = table.theta.shape
    small = [(mu, i) for mu in range(P) for i in range(M) if table.n[mu, i] < 2]
    if small and config.small_n_policy is SmallNPolicy.ERROR:
        names = ", ".join(f"({table.populations[mu]}, {table.traits[i]})" for mu, i in small)
        raise SmallSampleError(f"cells with n < 2: {names}")
    skip = set(small)
    cells = [(mu, i) for mu in range(P) for i in range(M) if (mu, i) not in skip]

    def run(cell):
        mu, i = cell
        stream = derive_stream(config.master_seed, mu, i, PURPOSE_BOOTSTRAP)
        return sigma_star_replicates(float(table.sigma[mu, i]), int(table.n[mu, i]), config.iterations, stream)

    workers = resolve_workers(config.workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sets = list(pool.map(run, cells))
    else:
        sets = [run(c) for c in cells]

    frak = np.array(table.sigma, dtype=np.float64)
    for (mu, i), s in zip(cells, sets):
        frak[mu, i] = s.std(ddof=1)
    report = BootstrapReport(
        frak_s=frak,
        flagged_cells=small,
        sigma_star_sets=dict(zip(cells, sets)) if config.keep_replicates else None,
    )
    return table.with_sigma(frak, SigmaKind.BOOTSTRAPPED), report


def bootstrap_distance_matrix(
    counts: TraitCounts, config: BootstrapConfig, raw: bool = False
) -> tuple[DistanceMatrix, BootstrapReport]:
    table, report = bootstrap_table(transform_counts(counts), config)
    kind = MatrixKind.RAW_MMD_BOOT if raw else MatrixKind.ST_MMD_BOOT
    return distance_matrix(table, kind), report
