"""Repeat the simulate, bootstrap and compare loop for good and poor data regimes.

    python3 scripts/artificial_study.py [--replicates 50] [--iterations 500]
"""

import argparse
import statistics
from collections import Counter
from dataclasses import replace

from mmdboot.biodistance import distance_matrix
from mmdboot.bootstrap import BootstrapConfig, bootstrap_distance_matrix
from mmdboot.cluster import upgma
from mmdboot.simulate import GOOD_DATA, POOR_DATA, generate, replicate_study
from mmdboot.transform import transform_counts


def shared_clusters(config, iterations, seed):
    counts = generate(config)
    plain = upgma(distance_matrix(transform_counts(counts)))
    boot = upgma(bootstrap_distance_matrix(counts, BootstrapConfig(iterations, seed))[0])
    return len(plain.clusters() & boot.clusters())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--replicates", type=int, default=50)
    ap.add_argument("--iterations", type=int, default=500)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    for label, config in (("good", GOOD_DATA), ("poor", POOR_DATA)):
        results = replicate_study(config, args.replicates, args.iterations, args.seed)
        errs = [r.relative_error_pct for r in results]
        kept = sum(r.topology_preserved for r in results)
        print(f"{label}: median E={statistics.median(errs):.2f}%  "
              f"E<=10% in {sum(e <= 10 for e in errs)}/{len(errs)}  topology kept {kept}/{len(results)}")
        overlap = Counter(
            shared_clusters(replace(config, master_seed=config.master_seed + r), args.iterations, args.seed + r)
            for r in range(args.replicates)
        )
        total = config.n_populations - 1
        print(f"  clusters shared out of {total}: " + ", ".join(f"{k}:{v}" for k, v in sorted(overlap.items(), reverse=True)))


if __name__ == "__main__":
    main()
