"""End-to-end count estimation: tree choice, preprocessing, sampling, rescale.

One run draws k tree matches, validates each, counts its full-motif
extensions, and rescales: estimate = (sum of extension counts corrected for
window overlap) / k * W.  The accumulator is exact (integer sixths, merged
across workers as plain ints), so the estimate is bit-reproducible for a
fixed seed at any worker count; floats appear only in the final division.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .graph import TemporalGraph
from .motif import Motif, SpanningTree, select_spanning_tree
from .preprocess import WeightTable, preprocess

_VIOLATION_KEYS = ("vertex_map", "delta_interval", "edge_order")


@dataclass(frozen=True)
class EstimateConfig:
    """Knobs for one estimation job.

    `use_c2`/`use_c3` are internal hooks for the constraint-ablation study;
    production runs keep both on.
    """

    samples: int
    seed: int = 0
    workers: int = 1
    n_candidates: int = 5
    tree: SpanningTree | None = None
    runs: int = 1
    use_c2: bool = True
    use_c3: bool = True

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.n_candidates < 1:
            raise ValueError("n_candidates must be >= 1")


@dataclass
class EstimateReport:
    """Everything a run learned, including the exact pre-division tally."""

    estimate: float
    total_weight: object
    window_weights: tuple
    tree: dict
    valid_rate: float
    invalid_rates: dict
    timings: dict
    seed: int
    samples: int
    runs: int
    per_run: list[float]
    raw_count: Fraction
    max_extension: int
    no_tree_matches: bool = False
    overflowed: bool = False
    spread_mean: float | None = None
    spread_std: float | None = None


def advise_samples(bound: float, eps: float, gamma: float, weight: float,
                   count_guess: float) -> int:
    """Sample budget for (1 +- eps) accuracy with probability 1 - gamma.

    `bound` caps the extensions a single tree match can produce and
    `count_guess` stands in for the unknown true count; both are the
    caller's problem, which keeps this advisory.
    """
    if min(bound, weight, count_guess) <= 0:
        raise ValueError("bound, weight and count_guess must be positive")
    if not (0 < eps < 1 and 0 < gamma < 1):
        raise ValueError("eps and gamma must lie in (0, 1)")
    raw = (3.0 * bound / (eps * eps)) * (weight / count_guess) * math.log(2.0 / gamma)
    return max(1, math.ceil(raw - 1e-9))


def _allocate(window_totals, total, k: int, rng: np.random.Generator) -> np.ndarray:
    probs = np.asarray([float(w) / float(total) for w in window_totals])
    probs = probs / probs.sum()
    return rng.multinomial(k, probs).astype(np.int64)


def _sampling_run(table: WeightTable, k: int, seed: int, workers: int):
    """One sampling pass over k draws; returns exact tallies."""
    graph = table.graph
    packed = table.packed
    q = table.partition.count
    alloc_rng = np.random.Generator(np.random.PCG64(seed ^ 0x5EED5EED))
    allocation = _allocate(table.window_totals, table.total, k, alloc_rng)
    draw_off = np.zeros(q + 1, dtype=np.int64)
    np.cumsum(allocation, out=draw_off[1:])

    n_chunks = max(workers, min(k, workers * 64))
    cnt6 = np.zeros(n_chunks, dtype=np.int64)
    cnt6_f = np.zeros(n_chunks, dtype=np.float64)
    tally = np.zeros((n_chunks, 4), dtype=np.int64)
    maxd = np.zeros(n_chunks, dtype=np.int64)
    fault = np.zeros(n_chunks, dtype=np.int64)
    ofl = np.zeros(n_chunks, dtype=np.uint8)
    cap = _kernels._CAPF if table.overflowed else int(_kernels._CAP)

    import numba
    numba.set_num_threads(max(1, min(workers, numba.config.NUMBA_NUM_THREADS)))
    _kernels.estimate_batch(
        np.uint64(seed), 0, k, draw_off,
        graph.ts, graph.src, graph.dst,
        graph.out_off, graph.out_ts, graph.out_eid, graph.out_dst,
        graph.in_off, graph.in_ts, graph.in_eid, graph.in_src,
        table.win_lo, table.win_hi, table.win_first, table.entry_off,
        table.win_w, table.ccum, table.w, cap,
        packed.center_slot, packed.center_src, packed.center_dst,
        packed.desc_slots, packed.slot_far,
        packed.trip_off, packed.trip_child, packed.trip_alpha,
        packed.trip_beta, packed.trip_anchor_src,
        graph.pair_keys, graph.pair_off, graph.pair_ts,
        packed.nt_src, packed.nt_dst, packed.nt_prev, packed.nt_next,
        packed.gap_off,
        table.delta, table.use_c2, table.use_c3, packed.n_vertices, q,
        n_chunks,
        cnt6, cnt6_f, tally, maxd, fault, ofl)
    if fault.sum():
        raise RuntimeError("internal consistency fault: empty candidate list "
                           "under positive parent weight")
    overflow = bool(ofl.any() or (cnt6 > int(_kernels._CAP)).any())
    if overflow:
        raw = Fraction(float(cnt6_f.sum())).limit_denominator(6)
    else:
        raw = Fraction(sum(int(x) for x in cnt6), 6)
    tallies = tally.sum(axis=0)
    return raw, tallies, int(maxd.max(initial=0)), overflow


def estimate(motif: Motif, graph: TemporalGraph, config: EstimateConfig) -> EstimateReport:
    """Unbiased count estimate with diagnostics.

    With runs > 1 the sampling phase repeats with derived seeds against the
    one preprocessed table, and the report carries per-run estimates plus
    their relative spread.
    """
    timings = {"preprocess": 0.0, "sample": 0.0}
    t0 = time.perf_counter()
    if graph.m == 0:
        tree = config.tree or select_spanning_tree_empty(motif)
        return _zero_report(motif, tree, config, timings)
    if config.tree is not None:
        tree = config.tree
    else:
        tree = select_spanning_tree(motif, graph, config.n_candidates,
                                    use_c2=config.use_c2, use_c3=config.use_c3)
    table = preprocess(tree, graph, motif.delta,
                       use_c2=config.use_c2, use_c3=config.use_c3)
    timings["preprocess"] = time.perf_counter() - t0

    if not float(table.total) > 0:
        report = _zero_report(motif, tree, config, timings)
        report.window_weights = table.window_totals
        return report

    t1 = time.perf_counter()
    k = config.samples
    per_run = []
    raws = []
    tallies = np.zeros(4, dtype=np.int64)
    maxd = 0
    overflow = bool(table.overflowed)
    for r in range(config.runs):
        seed_r = (config.seed + r) & 0xFFFFFFFFFFFFFFFF
        raw, t, md, ofl = _sampling_run(table, k, seed_r, config.workers)
        raws.append(raw)
        tallies += t
        maxd = max(maxd, md)
        overflow = overflow or ofl
        if isinstance(table.total, float) or ofl:
            per_run.append(float(raw) / k * float(table.total))
        else:
            per_run.append(float(raw / k * table.total))
    timings["sample"] = time.perf_counter() - t1

    attempted = int(tallies.sum())
    valid_rate = tallies[0] / attempted if attempted else 0.0
    invalid = {key: tallies[i + 1] / attempted if attempted else 0.0
               for i, key in enumerate(_VIOLATION_KEYS)}
    spread_mean = spread_std = None
    if config.runs > 1:
        arr = np.asarray(per_run)
        spread_mean = float(arr.mean())
        spread_std = float(arr.std(ddof=1))
    return EstimateReport(
        estimate=per_run[0] if config.runs == 1 else float(np.mean(per_run)),
        total_weight=table.total,
        window_weights=table.window_totals,
        tree=tree.describe(),
        valid_rate=float(valid_rate),
        invalid_rates={k2: float(v) for k2, v in invalid.items()},
        timings=timings,
        seed=config.seed,
        samples=config.samples,
        runs=config.runs,
        per_run=per_run,
        raw_count=raws[0],
        max_extension=maxd,
        overflowed=overflow,
        spread_mean=spread_mean,
        spread_std=spread_std,
    )


def select_spanning_tree_empty(motif: Motif) -> SpanningTree:
    """Tree choice without a graph: best looseness, enumeration order ties."""
    from .motif import enumerate_rooted_spanning_trees

    trees = enumerate_rooted_spanning_trees(motif)
    return min(trees, key=lambda t: (t.looseness, trees.index(t)))


def _zero_report(motif: Motif, tree: SpanningTree, config: EstimateConfig,
                 timings: dict) -> EstimateReport:
    timings.setdefault("sample", 0.0)
    return EstimateReport(
        estimate=0.0, total_weight=0, window_weights=(),
        tree=tree.describe(), valid_rate=0.0,
        invalid_rates={k: 0.0 for k in _VIOLATION_KEYS},
        timings=timings, seed=config.seed, samples=config.samples,
        runs=config.runs, per_run=[0.0] * config.runs,
        raw_count=Fraction(0), max_extension=0, no_tree_matches=True)
