"""Recompute the bundled distance matrices and diagnostics from the transcribed counts.

    python3 scripts/reproduce_tables.py [--iterations 500] [--seed 42]
"""

import argparse

import numpy as np

from mmdboot.biodistance import distance_matrix, format_matrix
from mmdboot.bootstrap import BootstrapConfig, bootstrap_distance_matrix
from mmdboot.cluster import topology_equal, upgma
from mmdboot.datasets import DATASETS, load_counts, load_matrix
from mmdboot.diagnostics import information_fractions, rescale_stats
from mmdboot.transform import transform_counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--iterations", type=int, default=500)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    for name in DATASETS:
        counts = load_counts(name)
        plain = distance_matrix(transform_counts(counts))
        boot, _ = bootstrap_distance_matrix(counts, BootstrapConfig(args.iterations, args.seed))
        ref_plain, ref_boot = load_matrix(name), load_matrix(name, bootstrapped=True)

        print(f"== {name}")
        print("information fraction:", " ".join(f"{t:.2f}" for t in information_fractions(counts)))
        print(f"plain stMMD, max deviation from bundled: {np.abs(plain.values - ref_plain.values).max():.4f}")
        print(format_matrix(plain), end="")
        print(f"bootstrapped stMMD (B={args.iterations}, seed={args.seed})")
        print(format_matrix(boot), end="")
        print(f"E bundled pair  = {rescale_stats(ref_plain, ref_boot).relative_error_pct:.4f}%")
        print(f"E this run      = {rescale_stats(plain, boot).relative_error_pct:.4f}%")
        print(f"UPGMA topology kept (bundled): {topology_equal(upgma(ref_plain), upgma(ref_boot))}")
        print(f"UPGMA topology kept (this run): {topology_equal(upgma(plain), upgma(boot))}")
        print()


if __name__ == "__main__":
    main()
