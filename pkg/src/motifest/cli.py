"""Command-line front end.

Three subcommands: `estimate` (weighted-sampling estimator), `exact`
(chronological backtracking count), and `trees` (enumerate rooted spanning
trees with their scores).  Every successful run prints one JSON document to
stdout with a stable key set; diagnostics go to stderr.  Exit codes: 0 ok,
1 usage error, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from .estimate import EstimateConfig, estimate
from .graph import EdgeListParseError, load_graph
from .motif import MotifError, enumerate_rooted_spanning_trees, parse_motif
from .oracle import exact_count
from .preprocess import preprocess


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; the contract here is exit 1
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="motifest", description=__doc__)
    sub = parser.add_subparsers(dest="mode", required=True)

    est = sub.add_parser("estimate", help="estimate the motif count by sampling")
    est.add_argument("--graph", required=True, help="edge-list file: 'src dst t' lines")
    est.add_argument("--motif", required=True, help="motif file: 'x y' lines in time order")
    est.add_argument("--delta", required=True, type=int, help="time window length")
    est.add_argument("--samples", required=True, type=int, help="number of draws")
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--threads", type=int, default=1)
    est.add_argument("--candidates", type=int, default=5,
                     help="spanning trees short-listed by looseness")
    est.add_argument("--tree", type=int, default=None,
                     help="force the rooted tree with this index from `trees`")
    est.add_argument("--runs", type=int, default=1,
                     help="independent repetitions for error statistics")
    est.add_argument("--dump-weights", action="store_true",
                     help="include per-window sampling weights in the report")

    exact = sub.add_parser("exact", help="count motif matches exactly")
    exact.add_argument("--graph", required=True)
    exact.add_argument("--motif", required=True)
    exact.add_argument("--delta", required=True, type=int)
    exact.add_argument("--threads", type=int, default=1)

    trees = sub.add_parser("trees", help="list rooted spanning trees")
    trees.add_argument("--motif", required=True)
    trees.add_argument("--graph", default=None,
                       help="optionally compute each tree's total weight on this graph")
    trees.add_argument("--delta", type=int, default=None)
    return parser


def _report_skeleton(mode: str) -> dict:
    return {"mode": mode, "count": None, "estimate": None, "W": None,
            "valid_rate": None, "invalid": None, "tree": None,
            "timings": None, "seed": None}


def _load_inputs(args, delta: int):
    with open(args.graph, "rb") as fh:
        graph = load_graph(fh.read())
    with open(args.motif, "rb") as fh:
        motif = parse_motif(fh.read(), delta)
    return graph, motif


def _cmd_estimate(args) -> dict:
    if args.delta <= 0:
        raise _UsageError("--delta must be positive")
    if args.samples < 1:
        raise _UsageError("--samples must be >= 1")
    if args.threads < 1 or args.candidates < 1 or args.runs < 1:
        raise _UsageError("--threads, --candidates and --runs must be >= 1")
    graph, motif = _load_inputs(args, args.delta)
    tree = None
    if args.tree is not None:
        candidates = enumerate_rooted_spanning_trees(motif)
        if not 0 <= args.tree < len(candidates):
            raise _UsageError(
                f"--tree index out of range (have {len(candidates)} rooted trees)")
        tree = candidates[args.tree]
    config = EstimateConfig(samples=args.samples, seed=args.seed,
                            workers=args.threads, n_candidates=args.candidates,
                            tree=tree, runs=args.runs)
    result = estimate(motif, graph, config)
    report = _report_skeleton("estimate")
    report.update({
        "estimate": result.estimate,
        "W": result.total_weight,
        "valid_rate": result.valid_rate,
        "invalid": result.invalid_rates,
        "tree": result.tree,
        "timings": result.timings,
        "seed": result.seed,
        "samples": result.samples,
        "runs": result.runs,
        "per_run": result.per_run,
        "max_extension": result.max_extension,
        "no_tree_matches": result.no_tree_matches,
        "overflowed": result.overflowed,
    })
    if result.spread_mean is not None:
        report["spread"] = {"mean": result.spread_mean, "std": result.spread_std}
    if args.dump_weights:
        report["window_weights"] = list(result.window_weights)
    return report


def _cmd_exact(args) -> dict:
    if args.delta <= 0:
        raise _UsageError("--delta must be positive")
    if args.threads < 1:
        raise _UsageError("--threads must be >= 1")
    graph, motif = _load_inputs(args, args.delta)
    t0 = time.perf_counter()
    count = exact_count(motif, graph, threads=args.threads)
    report = _report_skeleton("exact")
    report["count"] = count
    report["timings"] = {"count": time.perf_counter() - t0}
    return report


def _cmd_trees(args) -> dict:
    if (args.graph is None) != (args.delta is None):
        raise _UsageError("--graph and --delta go together")
    if args.delta is not None and args.delta <= 0:
        raise _UsageError("--delta must be positive")
    delta = args.delta if args.delta is not None else 1
    with open(args.motif, "rb") as fh:
        motif = parse_motif(fh.read(), delta)
    graph = None
    if args.graph is not None:
        with open(args.graph, "rb") as fh:
            graph = load_graph(fh.read())
    t0 = time.perf_counter()
    rows = []
    for i, tree in enumerate(enumerate_rooted_spanning_trees(motif)):
        row = {"index": i, **tree.describe()}
        if graph is not None and graph.m > 0:
            row["W"] = preprocess(tree, graph, delta).total
        rows.append(row)
    report = _report_skeleton("trees")
    report["trees"] = rows
    report["timings"] = {"enumerate": time.perf_counter() - t0}
    return report


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.mode == "estimate":
            report = _cmd_estimate(args)
        elif args.mode == "exact":
            report = _cmd_exact(args)
        else:
            report = _cmd_trees(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (OSError, EdgeListParseError, MotifError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
