"""Anscombe angular transform of trait frequencies and its null standard deviation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .trait_data import TraitCounts


class SigmaKind(str, enum.Enum):
    ANALYTIC = "analytic"
    BOOTSTRAPPED = "bootstrapped"


def anscombe_theta(k: int, n: int) -> float:
    """``asin(1 - 2 (k + 3/8) / (n + 3/4))`` in radians.

    The argument is strictly inside (-1, 1) for every ``0 <= k <= n``.
    """
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return math.asin(1.0 - 2.0 * (k + 0.375) / (n + 0.75))


def trait_sigma(n: int) -> float:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return 1.0 / math.sqrt(n + 0.5)


@dataclass(frozen=True)
class ThetaRow:
    """One population's transformed values, sigmas and measured counts."""

    theta: np.ndarray
    sigma: np.ndarray
    n: np.ndarray
    sigma_kind: SigmaKind


@dataclass(frozen=True, eq=False)
class ThetaTable:
    populations: tuple[str, ...]
    traits: tuple[str, ...]
    theta: np.ndarray
    sigma: np.ndarray
    sigma_kind: SigmaKind
    n: np.ndarray

    def __post_init__(self):
        for name in ("theta", "sigma", "n"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "sigma_kind", SigmaKind(self.sigma_kind))
        shape = (len(self.populations), len(self.traits))
        if self.theta.shape != shape or self.sigma.shape != shape or self.n.shape != shape:
            raise ValueError("theta/sigma/n shapes do not match labels")
        if not np.all(np.abs(self.theta) < math.pi / 2):
            raise ValueError("theta outside (-pi/2, pi/2)")
        if not np.all(self.sigma > 0):
            raise ValueError("sigma must be strictly positive")

    def row(self, mu: int) -> ThetaRow:
        return ThetaRow(self.theta[mu], self.sigma[mu], self.n[mu], self.sigma_kind)

    def with_sigma(self, sigma: np.ndarray, kind: SigmaKind) -> "ThetaTable":
        return ThetaTable(self.populations, self.traits, self.theta, sigma, kind, self.n)


def transform_counts(counts: TraitCounts) -> ThetaTable:
    n = counts.n.astype(np.float64)
    k = counts.k.astype(np.float64)
    theta = np.arcsin(1.0 - 2.0 * (k + 0.375) / (n + 0.75))
    sigma = 1.0 / np.sqrt(n + 0.5)
    return ThetaTable(counts.populations, counts.traits, theta, sigma, SigmaKind.ANALYTIC, counts.n)


def format_theta_table(table: ThetaTable, decimals: int = 6) -> str:
    lines = ["population,trait,n,theta,sigma"]
    for mu, pop in enumerate(table.populations):
        for i, trait in enumerate(table.traits):
            lines.append(
                f"{pop},{trait},{table.n[mu, i]},{table.theta[mu, i]:.{decimals}f},{table.sigma[mu, i]:.{decimals}f}"
            )
    return "\n".join(lines) + "\n"
