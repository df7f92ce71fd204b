"""Command-line front end: ``mmdboot <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .biodistance import MatrixKind, chi2_pair, distance_matrix, format_matrix, read_matrix, zero_count_pairs
from .bootstrap import BootstrapConfig, SmallNPolicy, bootstrap_table, resolve_workers
from .cluster import render_text, to_newick, upgma
from .diagnostics import Thresholds, log_spaced_sizes, representativeness_report, scaling_fit, scaling_points
from .simulate import SimConfig, generate, replicate_study
from .trait_data import DataError, TraitCounts, format_counts, read_counts, read_individuals
from .transform import format_theta_table, transform_counts


@dataclass
class RunManifest:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    seed: int | None = None
    parameters: dict = field(default_factory=dict)
    tool_version: str = __version__


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return value


def _precision(text: str) -> int:
    value = int(text)
    if not 0 <= value <= 12:
        raise argparse.ArgumentTypeError("precision must be between 0 and 12")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _load_counts(args) -> TraitCounts:
    counts_path = getattr(args, "counts", None)
    path = counts_path or args.individuals
    reader = read_counts if counts_path else read_individuals
    try:
        return reader(path)
    except DataError as exc:
        raise DataError(f"{path}: {exc}", exc.row, exc.column) from None


def _load_matrix(path, kind):
    try:
        return read_matrix(path, kind)
    except DataError as exc:
        raise DataError(f"{path}: {exc}", exc.row, exc.column) from None


def _inputs(args) -> list[str]:
    names = ("counts", "individuals", "matrix", "matrix_plain", "matrix_boot")
    return [getattr(args, n) for n in names if getattr(args, n, None)]


def _add_input(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--counts", help="count-level CSV (population,pop_size,trait,n,k)")
    g.add_argument("--individuals", help="individual-level CSV (population,individual,<traits>)")


def _add_sim(p):
    p.add_argument("--populations", type=_positive, default=10)
    p.add_argument("--traits", type=_positive, default=13)
    p.add_argument("--max-size", type=_positive, default=100)
    p.add_argument("--lambda1", type=_positive, default=50)
    p.add_argument("--lambda2", type=_positive, default=45)
    p.add_argument("--seed", type=_u64, default=7)


def _sim_config(args) -> SimConfig:
    return SimConfig(args.populations, args.traits, args.max_size, args.lambda1, args.lambda2, args.seed)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", action="store_true", help="print the run manifest as JSON to stderr")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--workers", type=int, default=None, help="worker threads (default: $MMD_THREADS, 0 = auto)")

    parser = argparse.ArgumentParser(prog="mmdboot", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("ingest", parents=[common], help="aggregate an individual-level CSV to counts")
    p.add_argument("--individuals", required=True)

    p = sub.add_parser("transform", parents=[common], help="dump theta and sigma per cell")
    _add_input(p)

    p = sub.add_parser("distances", parents=[common], help="standardized MMD matrix")
    _add_input(p)
    p.add_argument("--raw", action="store_true", help="unstandardized, unclamped MMD")
    p.add_argument("--precision", type=_precision, default=2)

    p = sub.add_parser("chi2", parents=[common], help="chi-square test for one pair of populations")
    _add_input(p)
    p.add_argument("--pair", required=True, help='"<population A>,<population B>"')

    p = sub.add_parser("bootstrap", parents=[common], help="matrix with bootstrapped sigmas")
    _add_input(p)
    p.add_argument("--iterations", type=_positive, default=500)
    p.add_argument("--seed", type=_u64, default=42)
    p.add_argument("--raw", action="store_true")
    p.add_argument("--precision", type=_precision, default=2)
    p.add_argument("--keep-replicates", metavar="DIR", help="dump each cell's sigma* values here")
    p.add_argument("--small-n-policy", choices=[s.value for s in SmallNPolicy], default="skip_trait")

    p = sub.add_parser("diagnose", parents=[common], help="representativeness report")
    p.add_argument("--counts", required=True)
    p.add_argument("--matrix-plain", required=True)
    p.add_argument("--matrix-boot", required=True)
    p.add_argument("--e-threshold", type=float, default=10.0)
    p.add_argument("--t-threshold", type=float, default=0.5)
    p.add_argument("--min-size", type=int, default=10)

    p = sub.add_parser("cluster", parents=[common], help="UPGMA tree in Newick format")
    p.add_argument("--matrix", required=True)

    p = sub.add_parser("simulate", parents=[common], help="generate artificial count data")
    _add_sim(p)

    p = sub.add_parser("study", parents=[common], help="repeat simulate -> bootstrap -> compare")
    _add_sim(p)
    p.add_argument("--replicates", type=_positive, default=10)
    p.add_argument("--iterations", type=_positive, default=500)
    p.add_argument("--e-threshold", type=float, default=10.0)

    p = sub.add_parser("scaling-study", parents=[common], help="bootstrapped sigma versus n, with power-law fit")
    p.add_argument("--n-min", type=_positive, default=10)
    p.add_argument("--n-max", type=_positive, default=1000)
    p.add_argument("--steps", type=_positive, default=20)
    p.add_argument("--iterations", type=_positive, default=500)
    p.add_argument("--seed", type=_u64, default=42)
    p.add_argument("--seeds", type=_positive, default=1, help="average over this many consecutive seeds")
    return parser


def _bootstrap_config(args) -> BootstrapConfig:
    if args.iterations < 2:
        raise UsageError("--iterations must be at least 2")
    return BootstrapConfig(
        iterations=args.iterations,
        master_seed=args.seed,
        small_n_policy=args.small_n_policy,
        keep_replicates=bool(args.keep_replicates),
        workers=resolve_workers(args.workers),
    )


def cmd_ingest(args):
    _write(format_counts(_load_counts(args)), args.out)


def cmd_transform(args):
    _write(format_theta_table(transform_counts(_load_counts(args))), args.out)


def cmd_distances(args):
    table = transform_counts(_load_counts(args))
    for a, b, t in zero_count_pairs(table):
        print(f"note: trait {t} unmeasured in {a} or {b}; included with theta=0, sigma^2=2", file=sys.stderr)
    kind = MatrixKind.RAW_MMD if args.raw else MatrixKind.ST_MMD
    _write(format_matrix(distance_matrix(table, kind), args.precision), args.out)


def cmd_chi2(args):
    counts = _load_counts(args)
    names = [s.strip() for s in args.pair.split(",")]
    if len(names) != 2:
        raise UsageError('--pair takes two population labels separated by a comma')
    table = transform_counts(counts)
    test = chi2_pair(table.row(counts.index(names[0])), table.row(counts.index(names[1])))
    _write(f"{test}\n", args.out)


def cmd_bootstrap(args):
    counts = _load_counts(args)
    config = _bootstrap_config(args)
    table, report = bootstrap_table(transform_counts(counts), config)
    kind = MatrixKind.RAW_MMD_BOOT if args.raw else MatrixKind.ST_MMD_BOOT
    _write(format_matrix(distance_matrix(table, kind), args.precision), args.out)
    if args.keep_replicates:
        outdir = Path(args.keep_replicates)
        outdir.mkdir(parents=True, exist_ok=True)
        for (mu, i), values in sorted(report.sigma_star_sets.items()):
            body = "sigma_star\n" + "".join(f"{v:.17g}\n" for v in values)
            (outdir / f"cell_{mu:03d}_{i:03d}.csv").write_text(body, encoding="utf-8")
    flagged = ";".join(f"{counts.populations[mu]}/{counts.traits[i]}" for mu, i in report.flagged_cells)
    print(f"seed={config.master_seed} iterations={config.iterations} flagged_cells={flagged or 'none'}", file=sys.stderr)


def cmd_diagnose(args):
    counts = _load_counts(args)
    plain = _load_matrix(args.matrix_plain, MatrixKind.ST_MMD)
    boot = _load_matrix(args.matrix_boot, MatrixKind.ST_MMD_BOOT)
    thresholds = Thresholds(args.e_threshold, args.t_threshold, args.min_size)
    _write(representativeness_report(counts, plain, boot, thresholds), args.out)


def cmd_cluster(args):
    tree = upgma(_load_matrix(args.matrix, MatrixKind.ST_MMD))
    newick = to_newick(tree) + "\n"
    if args.out:
        _write(newick, args.out)
        sys.stdout.write(render_text(tree))
    else:
        sys.stdout.write(render_text(tree) + newick)


def cmd_simulate(args):
    _write(format_counts(generate(_sim_config(args))), args.out)


def cmd_study(args):
    results = replicate_study(_sim_config(args), args.replicates, args.iterations, args.seed, resolve_workers(args.workers))
    lines = ["data_seed bootstrap_seed E_pct topology_preserved"]
    lines += [f"{r.data_seed} {r.bootstrap_seed} {r.relative_error_pct:.4f} {int(r.topology_preserved)}" for r in results]
    errs = np.array([r.relative_error_pct for r in results])
    kept = sum(r.topology_preserved for r in results)
    lines += [
        f"# median_E_pct={np.median(errs):.4f}",
        f"# topology_preserved={kept}/{len(results)}",
        f"# verdict={'representative' if np.median(errs) <= args.e_threshold else 'not_representative'}",
    ]
    _write("\n".join(lines) + "\n", args.out)


def cmd_scaling_study(args):
    if args.n_min < 2 or args.n_min >= args.n_max:
        raise UsageError("need 2 <= --n-min < --n-max")
    sizes = log_spaced_sizes(args.n_min, args.n_max, args.steps)
    seeds = [args.seed + j for j in range(args.seeds)]
    pts = scaling_points(sizes, args.iterations, seeds)
    fit = scaling_fit(pts[:, [0, 2]])
    lines = ["# n sigma frak_s fit"]
    lines += [f"{int(n)} {s:.9g} {f:.9g} {fit.predict(n):.9g}" for n, s, f in pts]
    _write("\n".join(lines) + "\n", args.out)
    summary = f"A={fit.prefactor_a:.6g} beta={fit.exponent_beta:.6g} r={fit.correlation_r:.6g} seed={args.seed}\n"
    if args.out:
        sys.stdout.write(summary)
    else:
        sys.stderr.write(summary)


COMMANDS = {
    "ingest": cmd_ingest,
    "transform": cmd_transform,
    "distances": cmd_distances,
    "chi2": cmd_chi2,
    "bootstrap": cmd_bootstrap,
    "diagnose": cmd_diagnose,
    "cluster": cmd_cluster,
    "simulate": cmd_simulate,
    "study": cmd_study,
    "scaling-study": cmd_scaling_study,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        print("hint: choose a command, e.g. 'mmdboot distances --counts data.csv'", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.manifest:
        params = {k: v for k, v in vars(args).items() if k not in ("command", "manifest", "seed")}
        manifest = RunManifest(args.command, _inputs(args), getattr(args, "seed", None), params)
        print(json.dumps(asdict(manifest), sort_keys=True), file=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"mmdboot {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (DataError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"mmdboot {args.command}: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
