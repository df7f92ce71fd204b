"""Non-metric trait observations: individual records and aggregated counts."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

PRESENT, ABSENT, MISSING = 1, 0, None
_CELL = {"1": PRESENT, "0": ABSENT, "?": MISSING}

COUNTS_HEADER = ["population", "pop_size", "trait", "n", "k"]


class DataError(ValueError):
    """Malformed or inconsistent input data.

    ``row`` and ``column`` are 1-based file positions (header is row 1) when known.
    """

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TraitCounts:
    """Per-population, per-trait measured counts ``n`` and presence counts ``k``."""

    populations: tuple[str, ...]
    traits: tuple[str, ...]
    n: np.ndarray
    k: np.ndarray
    pop_size: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "populations", tuple(self.populations))
        object.__setattr__(self, "traits", tuple(self.traits))
        for name in ("n", "k", "pop_size"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        self.validate()

    def validate(self):
        P, M = len(self.populations), len(self.traits)
        if P < 2:
            raise DataError(f"need at least 2 populations, got {P}")
        if M < 1:
            raise DataError("need at least 1 trait")
        if len(set(self.populations)) != P:
            raise DataError("population labels must be unique")
        if len(set(self.traits)) != M:
            raise DataError("trait labels must be unique")
        if self.n.shape != (P, M) or self.k.shape != (P, M) or self.pop_size.shape != (P,):
            raise DataError("count matrix shapes do not match the labels")
        for mu, i in zip(*np.nonzero(self.k < 0)):
            raise DataError(f"negative k for ({self.populations[mu]}, {self.traits[i]})")
        for mu, i in zip(*np.nonzero(self.k > self.n)):
            raise DataError(f"k exceeds n for ({self.populations[mu]}, {self.traits[i]})")
        for mu, i in zip(*np.nonzero(self.n > self.pop_size[:, None])):
            raise DataError(f"n exceeds pop_size for ({self.populations[mu]}, {self.traits[i]})")

    @property
    def shape(self) -> tuple[int, int]:
        return self.n.shape

    def __eq__(self, other):
        if not isinstance(other, TraitCounts):
            return NotImplemented
        return (
            self.populations == other.populations
            and self.traits == other.traits
            and np.array_equal(self.n, other.n)
            and np.array_equal(self.k, other.k)
            and np.array_equal(self.pop_size, other.pop_size)
        )

    def index(self, population: str) -> int:
        try:
            return self.populations.index(population)
        except ValueError:
            raise KeyError(f"unknown population {population!r}") from None


@dataclass(frozen=True)
class IndividualRecord:
    population: str
    individual_id: str
    values: tuple  # PRESENT / ABSENT / MISSING per trait


def csv_rows(stream: IO[str] | str) -> list[list[str]]:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    return [row for row in csv.reader(stream) if row and any(c.strip() for c in row)]


def parse_individuals(stream: IO[str] | str) -> tuple[list[str], list[IndividualRecord]]:
    """Parse an individual-level CSV; returns ``(trait_labels, records)``."""
    rows = csv_rows(stream)
    if not rows:
        raise DataError("empty individual file")
    header = [c.strip() for c in rows[0]]
    if len(header) < 3 or header[0] != "population" or header[1] != "individual":
        raise DataError("header must be 'population,individual,<trait1>,...'", row=1)
    traits = header[2:]
    seen = set()
    records = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"ragged row {r}: expected {len(header)} cells, got {len(row)}", row=r)
        pop, ident = row[0].strip(), row[1].strip()
        if (pop, ident) in seen:
            raise DataError(f"duplicate individual ({pop}, {ident}) at row {r}", row=r)
        seen.add((pop, ident))
        values = []
        for c, cell in enumerate(row[2:], start=3):
            cell = cell.strip()
            if cell not in _CELL:
                raise DataError(f"invalid trait value '{cell}' at row {r}, column {c}", row=r, column=c)
            values.append(_CELL[cell])
        records.append(IndividualRecord(pop, ident, tuple(values)))
    return traits, records


def aggregate(records: Sequence[IndividualRecord], traits: Sequence[str] | None = None) -> TraitCounts:
    """Count individuals, measured values and presences per population and trait."""
    if not records:
        raise DataError("no individual records to aggregate")
    M = len(records[0].values)
    if traits is None:
        traits = [f"T{i + 1}" for i in range(M)]
    if len(traits) != M:
        raise DataError("trait label count does not match record length")
    order: dict[str, int] = {}
    for rec in records:
        if len(rec.values) != M:
            raise DataError(f"record {rec.population}/{rec.individual_id} has {len(rec.values)} values, expected {M}")
        order.setdefault(rec.population, len(order))
    if len(order) < 2:
        raise DataError("need at least 2 populations")
    n = np.zeros((len(order), M), dtype=np.int64)
    k = np.zeros_like(n)
    size = np.zeros(len(order), dtype=np.int64)
    for rec in records:
        mu = order[rec.population]
        size[mu] += 1
        for i, v in enumerate(rec.values):
            if v is not MISSING:
                n[mu, i] += 1
                k[mu, i] += v == PRESENT
    return TraitCounts(tuple(order), tuple(traits), n, k, size)


def _int_cell(text: str, r: int, c: int, name: str) -> int:
    try:
        value = int(text.strip())
    except ValueError:
        raise DataError(f"invalid integer {name} '{text}' at row {r}, column {c}", row=r, column=c) from None
    if value < 0:
        raise DataError(f"negative {name} at row {r}, column {c}", row=r, column=c)
    return value


def parse_counts(stream: IO[str] | str) -> TraitCounts:
    """Parse a count-level CSV with header ``population,pop_size,trait,n,k``."""
    rows = csv_rows(stream)
    if not rows or [c.strip() for c in rows[0]] != COUNTS_HEADER:
        raise DataError("header must be 'population,pop_size,trait,n,k'", row=1)
    pops: dict[str, int] = {}
    traits: dict[str, int] = {}
    cells: dict[tuple[str, str], tuple[int, int]] = {}
    sizes: dict[str, int] = {}
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != 5:
            raise DataError(f"ragged row {r}: expected 5 cells, got {len(row)}", row=r)
        pop, trait = row[0].strip(), row[2].strip()
        size = _int_cell(row[1], r, 2, "pop_size")
        n = _int_cell(row[3], r, 4, "n")
        k = _int_cell(row[4], r, 5, "k")
        if k > n:
            raise DataError(f"k exceeds n for ({pop}, {trait}) at row {r}", row=r, column=5)
        if n > size:
            raise DataError(f"n exceeds pop_size for ({pop}, {trait}) at row {r}", row=r, column=4)
        if sizes.setdefault(pop, size) != size:
            raise DataError(f"inconsistent pop_size for {pop} at row {r}", row=r, column=2)
        if (pop, trait) in cells:
            raise DataError(f"duplicate ({pop}, {trait}) at row {r}", row=r)
        pops.setdefault(pop, len(pops))
        traits.setdefault(trait, len(traits))
        cells[(pop, trait)] = (n, k)
    n_mat = np.zeros((len(pops), len(traits)), dtype=np.int64)
    k_mat = np.zeros_like(n_mat)
    for pop, mu in pops.items():
        for trait, i in traits.items():
            if (pop, trait) not in cells:
                raise DataError(f"missing ({pop}, {trait}) combination")
            n_mat[mu, i], k_mat[mu, i] = cells[(pop, trait)]
    return TraitCounts(tuple(pops), tuple(traits), n_mat, k_mat, [sizes[p] for p in pops])


def format_counts(counts: TraitCounts) -> str:
    """Serialize to the count-level CSV format (inverse of :func:`parse_counts`)."""
    out = io.StringIO()
    out.write(",".join(COUNTS_HEADER) + "\n")
    for mu, pop in enumerate(counts.populations):
        for i, trait in enumerate(counts.traits):
            out.write(f"{pop},{counts.pop_size[mu]},{trait},{counts.n[mu, i]},{counts.k[mu, i]}\n")
    return out.getvalue()


def read_counts(path) -> TraitCounts:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_counts(fh)


def read_individuals(path) -> TraitCounts:
    with open(path, encoding="utf-8", newline="") as fh:
        traits, records = parse_individuals(fh)
    return aggregate(records, traits)

