"""Mean Measure of Divergence biodistances with a parametric bootstrap of trait sigmas."""

from .biodistance import (
    DistanceMatrix,
    MatrixKind,
    PairTest,
    chi2_pair,
    distance_matrix,
    mmd_pair,
    mmd_sigma_pair,
    st_mmd_pair,
)
from .bootstrap import BootstrapConfig, bootstrap_distance_matrix, bootstrap_table, frak_sigma, sigma_star
from .cluster import Dendrogram, to_newick, topology_equal, upgma
from .diagnostics import information_fraction, rescale_stats, scaling_fit
from .stochastic import RandomStream, derive_stream
from .trait_data import DataError, TraitCounts, aggregate, parse_counts, parse_individuals
from .transform import ThetaTable, anscombe_theta, trait_sigma, transform_counts

__version__ = "0.1.0"
