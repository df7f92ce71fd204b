"""Bundled reference datasets: two artificial sets and seven Basin of Mexico samples.

Each dataset has trait counts plus the published plain and bootstrapped
standardized distance matrices (two decimals).
"""

from __future__ import annotations

from importlib import resources

from .biodistance import DistanceMatrix, MatrixKind, parse_matrix
from .trait_data import TraitCounts, parse_counts

DATASETS = ("artificial_good", "artificial_poor", "basin_of_mexico")


def data_path(name: str):
    return resources.files(__package__) / "data" / name


def _check(dataset: str):
    if dataset not in DATASETS:
        raise KeyError(f"unknown dataset {dataset!r}; choose from {', '.join(DATASETS)}")


def load_counts(dataset: str) -> TraitCounts:
    _check(dataset)
    return parse_counts(data_path(f"{dataset}_counts.csv").read_text(encoding="utf-8"))


def load_matrix(dataset: str, bootstrapped: bool = False) -> DistanceMatrix:
    _check(dataset)
    suffix = "_stmmd_boot" if bootstrapped else "_stmmd"
    kind = MatrixKind.ST_MMD_BOOT if bootstrapped else MatrixKind.ST_MMD
    return parse_matrix(data_path(f"{dataset}{suffix}.csv").read_text(encoding="utf-8"), kind)
