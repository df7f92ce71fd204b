"""Mean Measure of Divergence, its null standard deviation, and chi-square tests.

Pairwise values use each row's own sigmas, so the same code serves both the
analytic variances ``1/(N + 1/2)`` and the bootstrapped ones.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass
from typing import IO

import numpy as np
from scipy.special import gammaincc

from .trait_data import DataError, csv_rows
from .transform import SigmaKind, ThetaRow, ThetaTable

P_VALUE_FLOOR = 1e-300


class MatrixKind(str, enum.Enum):
    RAW_MMD = "raw_mmd"
    ST_MMD = "st_mmd"
    RAW_MMD_BOOT = "raw_mmd_boot"
    ST_MMD_BOOT = "st_mmd_boot"

    @property
    def standardized(self) -> bool:
        return self in (MatrixKind.ST_MMD, MatrixKind.ST_MMD_BOOT)

    @property
    def bootstrapped(self) -> bool:
        return self in (MatrixKind.RAW_MMD_BOOT, MatrixKind.ST_MMD_BOOT)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    labels: tuple[str, ...]
    values: np.ndarray
    kind: MatrixKind = MatrixKind.ST_MMD

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "kind", MatrixKind(self.kind))
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        P = len(self.labels)
        if values.shape != (P, P):
            raise ValueError(f"matrix shape {values.shape} does not match {P} labels")
        if len(set(self.labels)) != P:
            raise ValueError("matrix labels must be unique")
        if not np.array_equal(values, values.T):
            raise ValueError("distance matrix is not symmetric")
        if np.any(np.diag(values) != 0):
            raise ValueError("distance matrix diagonal must be zero")
        if self.kind.standardized and np.any(values < 0):
            raise ValueError("standardized distances must be non-negative")

    def __getitem__(self, pair: tuple[str, str]) -> float:
        a, b = pair
        return float(self.values[self.labels.index(a), self.labels.index(b)])

    def upper(self) -> np.ndarray:
        """Off-diagonal upper-triangle entries in row-major order."""
        return self.values[np.triu_indices(len(self.labels), 1)]

    def permuted(self, order) -> "DistanceMatrix":
        order = list(order)
        return DistanceMatrix(
            [self.labels[j] for j in order], self.values[np.ix_(order, order)], self.kind
        )


@dataclass(frozen=True)
class PairTest:
    chi2: float
    dof: int
    p_value: float

    def __str__(self):
        p = f"<{P_VALUE_FLOOR:g}" if self.p_value < P_VALUE_FLOOR else f"={self.p_value:.6g}"
        return f"chi2={self.chi2:.4f} dof={self.dof} p{p}"


def _check_rows(a: ThetaRow, b: ThetaRow) -> int:
    if a.theta.shape != b.theta.shape:
        raise ValueError(f"trait count mismatch: {a.theta.shape[0]} vs {b.theta.shape[0]}")
    if a.sigma_kind != b.sigma_kind:
        raise ValueError(f"sigma kind mismatch: {a.sigma_kind.value} vs {b.sigma_kind.value}")
    return a.theta.shape[0]


def mmd_pair(a: ThetaRow, b: ThetaRow) -> float:
    """Unclamped MMD; may be negative."""
    M = _check_rows(a, b)
    terms = (a.theta - b.theta) ** 2 - a.sigma**2 - b.sigma**2
    return float(np.sum(terms) / M)


def mmd_sigma_pair(a: ThetaRow, b: ThetaRow) -> float:
    M = _check_rows(a, b)
    return float(math.sqrt(2.0 / M**2 * np.sum((a.sigma**2 + b.sigma**2) ** 2)))


def st_mmd_unclamped(a: ThetaRow, b: ThetaRow) -> float:
    return mmd_pair(a, b) / mmd_sigma_pair(a, b)


def st_mmd_pair(a: ThetaRow, b: ThetaRow) -> float:
    return max(0.0, st_mmd_unclamped(a, b))


def chi2_upper_tail(x: float, dof: int) -> float:
    """P(X > x) for X ~ chi-square(dof), via the regularized upper incomplete gamma."""
    if dof < 1:
        raise ValueError("dof must be positive")
    if x <= 0:
        return 1.0
    return float(gammaincc(dof / 2.0, x / 2.0))


def chi2_pair(a: ThetaRow, b: ThetaRow) -> PairTest:
    """Chi-square homogeneity statistic with M degrees of freedom.

    Only defined for analytic sigmas; there is no bootstrapped counterpart.
    """
    M = _check_rows(a, b)
    if a.sigma_kind is not SigmaKind.ANALYTIC:
        raise ValueError("chi-square test requires analytic sigmas, not bootstrapped ones")
    var = 1.0 / (a.n + 0.5) + 1.0 / (b.n + 0.5)
    chi2 = float(np.sum((a.theta - b.theta) ** 2 / var))
    return PairTest(chi2, M, chi2_upper_tail(chi2, M))


def distance_matrix(table: ThetaTable, kind: MatrixKind | str | None = None) -> DistanceMatrix:
    """All pairwise (standardized) MMDs.

    Standardized kinds are clamped at zero; raw kinds keep negative values for
    diagnostics.  ``kind`` defaults to the standardized kind matching the
    table's sigma kind.
    """
    boot = table.sigma_kind is SigmaKind.BOOTSTRAPPED
    if kind is None:
        kind = MatrixKind.ST_MMD_BOOT if boot else MatrixKind.ST_MMD
    kind = MatrixKind(kind)
    if kind.bootstrapped != boot:
        raise ValueError(f"matrix kind {kind.value} does not match {table.sigma_kind.value} sigmas")
    P = len(table.populations)
    if P < 2:
        raise ValueError("need at least 2 populations")
    rows = [table.row(mu) for mu in range(P)]
    values = np.zeros((P, P))
    for mu in range(P):
        for nu in range(mu + 1, P):
            if kind.standardized:
                v = st_mmd_pair(rows[mu], rows[nu])
            else:
                v = mmd_pair(rows[mu], rows[nu])
            values[mu, nu] = values[nu, mu] = v
    return DistanceMatrix(table.populations, values, kind)


def zero_count_pairs(table: ThetaTable) -> list[tuple[str, str, str]]:
    """(population, population, trait) triples where either side has n == 0."""
    out = []
    P = len(table.populations)
    for mu in range(P):
        for nu in range(mu + 1, P):
            for i in np.nonzero((table.n[mu] == 0) | (table.n[nu] == 0))[0]:
                out.append((table.populations[mu], table.populations[nu], table.traits[i]))
    return out


def format_matrix(matrix: DistanceMatrix, precision: int = 2) -> str:
    out = io.StringIO()
    out.write("," + ",".join(matrix.labels) + "\n")
    for label, row in zip(matrix.labels, matrix.values):
        out.write(label + "," + ",".join(f"{v:.{precision}f}" for v in row) + "\n")
    return out.getvalue()


def parse_matrix(stream: IO[str] | str, kind: MatrixKind | str = MatrixKind.ST_MMD) -> DistanceMatrix:
    """Read the ``,<label1>,...`` / ``label,v1,...`` CSV layout written by :func:`format_matrix`."""
    rows = csv_rows(stream)
    if not rows or rows[0][0].strip() != "":
        raise DataError("matrix header must start with an empty cell", row=1)
    labels = [c.strip() for c in rows[0][1:]]
    if len(rows) - 1 != len(labels):
        raise DataError(f"expected {len(labels)} matrix rows, got {len(rows) - 1}")
    values = np.zeros((len(labels), len(labels)))
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(labels) + 1:
            raise DataError(f"ragged matrix row {r}", row=r)
        if row[0].strip() != labels[r - 2]:
            raise DataError(f"row label '{row[0].strip()}' at row {r} does not match column order", row=r, column=1)
        for c, cell in enumerate(row[1:], start=2):
            try:
                values[r - 2, c - 2] = float(cell)
            except ValueError:
                raise DataError(f"invalid number '{cell}' at row {r}, column {c}", row=r, column=c) from None
    try:
        return DistanceMatrix(labels, values, kind)
    except ValueError as exc:
        raise DataError(str(exc)) from None


def read_matrix(path, kind: MatrixKind | str = MatrixKind.ST_MMD) -> DistanceMatrix:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_matrix(fh, kind)
