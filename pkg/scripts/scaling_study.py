"""Bootstrapped sigma versus n with its power-law fit.

Writes ``n sigma frak_s fit`` rows (suitable for plotting on log-log axes).

    python3 scripts/scaling_study.py [--seeds 5] [--out points.dat]
"""

import argparse
import sys

from mmdboot.diagnostics import log_spaced_sizes, scaling_fit, scaling_points


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=10)
    ap.add_argument("--n-max", type=int, default=1000)
    ap.add_argument("--steps", type=int, default=20)
    ap.add_argument("--iterations", type=int, default=500)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--out")
    args = ap.parse_args()

    sizes = log_spaced_sizes(args.n_min, args.n_max, args.steps)
    pts = scaling_points(sizes, args.iterations, range(args.seed, args.seed + args.seeds))
    fit = scaling_fit(pts[:, [0, 2]])
    out = open(args.out, "w") if args.out else sys.stdout
    print("# n sigma frak_s fit", file=out)
    for n, s, f in pts:
        print(f"{int(n)} {s:.9g} {f:.9g} {fit.predict(n):.9g}", file=out)
    if args.out:
        out.close()
    print(f"A={fit.prefactor_a:.4f} beta={fit.exponent_beta:.4f} r={fit.correlation_r:.5f}", file=sys.stderr)
    # sample sd of n normal draws has sd about sigma / sqrt(2 (n - 1)), i.e. A close to 1/sqrt(2)
    print(f"large-n reference prefactor 1/sqrt(2) = {2 ** -0.5:.4f}", file=sys.stderr)


if __name__ == "__main__":
    main()
