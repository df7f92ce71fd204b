"""Representativeness diagnostics: information fraction, rescaling error, power-law fit."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .biodistance import DistanceMatrix
from .bootstrap import frak_sigma
from .stochastic import PURPOSE_SCALING, derive_stream
from .trait_data import TraitCounts
from .transform import trait_sigma


@dataclass(frozen=True)
class Thresholds:
    relative_error_pct: float = 10.0
    information: float = 0.5
    min_pop_size: int = 10


@dataclass(frozen=True)
class RescaleStats:
    lambda_inv_mean: float
    spread: float
    relative_error_pct: float
    n_pairs: int


@dataclass(frozen=True)
class ScalingFit:
    prefactor_a: float
    exponent_beta: float
    correlation_r: float

    def predict(self, n):
        return self.prefactor_a / np.asarray(n, dtype=np.float64) ** self.exponent_beta


def information_fraction(counts: TraitCounts, mu: int, normalize: bool = False) -> float:
    """Measured observations per individual, ``sum_i N_mu_i / N_mu``.

    A fully measured population scores M; ``normalize=True`` divides by M so
    that complete data scores 1.
    """
    size = int(counts.pop_size[mu])
    if size <= 0:
        raise ValueError(f"population {counts.populations[mu]!r} has no individuals")
    value = float(counts.n[mu].sum()) / size
    if normalize:
        value /= len(counts.traits)
    return value


def information_fractions(counts: TraitCounts) -> np.ndarray:
    """Normalized information fraction for every population."""
    return np.array([information_fraction(counts, mu, normalize=True) for mu in range(len(counts.populations))])


def rescale_stats(d_plain: DistanceMatrix, d_boot: DistanceMatrix) -> RescaleStats:
    """Statistics of the entrywise ratios plain / bootstrapped over the upper triangle."""
    if d_plain.labels != d_boot.labels:
        raise ValueError("plain and bootstrapped matrices have different labels or order")
    P = len(d_plain.labels)
    iu = np.triu_indices(P, 1)
    boot = d_boot.values[iu]
    for mu, nu, v in zip(*iu, boot):
        if v == 0:
            raise ValueError(f"bootstrapped distance ({d_boot.labels[mu]}, {d_boot.labels[nu]}) is zero")
    ratios = d_plain.values[iu] / boot
    mean = float(ratios.mean())
    # a single pair has no spread
    spread = float(ratios.std(ddof=1)) if len(ratios) > 1 else 0.0
    err = 100.0 * spread / mean if mean > 0 else math.inf
    return RescaleStats(mean, spread, err, len(ratios))


def scaling_fit(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Least-squares fit of ``frak_s = A / n**beta`` on log-log axes."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise ValueError("need at least 3 (n, value) points")
    if np.any(pts <= 0):
        raise ValueError("all points must be strictly positive")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    xc, yc = x - x.mean(), y - y.mean()
    sxx, syy, sxy = xc @ xc, yc @ yc, xc @ yc
    if sxx == 0:
        raise ValueError("need at least two distinct n values")
    slope = sxy / sxx
    intercept = y.mean() - slope * x.mean()
    r = sxy / math.sqrt(sxx * syy) if syy > 0 else 0.0
    return ScalingFit(math.exp(intercept), -slope, r)


def log_spaced_sizes(n_min: int, n_max: int, steps: int) -> list[int]:
    """Distinct integers spread log-uniformly over ``[n_min, n_max]``."""
    if not 2 <= n_min < n_max or steps < 2:
        raise ValueError("need 2 <= n_min < n_max and steps >= 2")
    grid = np.rint(np.geomspace(n_min, n_max, steps)).astype(int)
    return sorted(set(int(v) for v in grid))


def scaling_points(sizes: Sequence[int], iterations: int, seeds: Sequence[int]) -> np.ndarray:
    """Rows ``(n, sigma, frak_s)``; ``frak_s`` is averaged over ``seeds``."""
    rows = []
    for n in sizes:
        sigma = trait_sigma(n)
        values = [frak_sigma(sigma, n, iterations, derive_stream(s, n, 0, PURPOSE_SCALING)) for s in seeds]
        rows.append((n, sigma, float(np.mean(values))))
    return np.array(rows)


def representativeness_report(
    counts: TraitCounts,
    d_plain: DistanceMatrix,
    d_boot: DistanceMatrix,
    thresholds: Thresholds = Thresholds(),
) -> str:
    """Human-readable report followed by ``key=value`` summary lines."""
    if tuple(counts.populations) != d_plain.labels:
        raise ValueError("count populations do not match matrix labels")
    stats = rescale_stats(d_plain, d_boot)
    info = information_fractions(counts)
    lines = ["population  N  information"]
    warnings = []
    for mu, pop in enumerate(counts.populations):
        size = int(counts.pop_size[mu])
        lines.append(f"{pop}  {size}  {info[mu]:.2f}")
        if info[mu] < thresholds.information:
            warnings.append(
                f"warning: {pop} has low information fraction {info[mu]:.2f} < {thresholds.information:g}"
            )
        if size < thresholds.min_pop_size:
            warnings.append(f"warning: {pop} has only {size} individuals (< {thresholds.min_pop_size})")
    lines += warnings
    representative = stats.relative_error_pct <= thresholds.relative_error_pct
    if representative:
        lines.append("verdict: rank order preserved; bootstrap optional")
    else:
        lines.append("verdict: bootstrap advisable")
    lines += [
        f"E_pct={stats.relative_error_pct:.4f}",
        f"lambda_inv_mean={stats.lambda_inv_mean:.6g}",
        f"spread={stats.spread:.6g}",
        f"n_pairs={stats.n_pairs}",
        f"n_warnings={len(warnings)}",
        f"verdict={'representative' if representative else 'not_representative'}",
    ]
    return "\n".join(lines) + "\n"
