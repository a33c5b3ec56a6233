"""Sliding-window partition and per-window sampling-weight tables.

The graph's timespan is cut into overlapping windows of length 2*delta with
stride delta, so any edge set spanning at most delta sits entirely inside at
least one window.  Per window, each graph edge gets one weight per tree edge:
the number of relaxed partial matches of that edge's subtree, computed
bottom-up by height.  The window totals over the center edge's weights drive
both window selection and the per-window sampling distribution.

Weights are 64-bit integers with saturation checks; if any window saturates,
the whole table is recomputed in float64 and flagged (counts near 2^61 are
far beyond anything the exactness tests exercise).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import _kernels
from .graph import TemporalGraph
from .motif import Motif, SpanningTree


@dataclass(frozen=True)
class WindowPartition:
    """Overlapping 2*delta windows [i*delta, (i+2)*delta] over shifted time."""

    delta: int
    count: int
    bounds: tuple[tuple[int, int], ...]
    edge_ranges: tuple[tuple[int, int], ...]
    regular: bool = True

    def containing_count(self, t_lo: int, t_hi: int) -> int:
        """Number of windows that contain the whole interval [t_lo, t_hi]."""
        if not self.regular:
            return sum(1 for lo, hi in self.bounds if lo <= t_lo and t_hi <= hi)
        i_lo = max(0, -(-t_hi // self.delta) - 2)
        i_hi = min(self.count - 1, t_lo // self.delta)
        return max(0, i_hi - i_lo + 1)

    def view(self, graph: TemporalGraph, i: int) -> "WindowView":
        lo, hi = self.bounds[i]
        start, stop = self.edge_ranges[i]
        return WindowView(graph, i, lo, hi, start, stop)


@dataclass(frozen=True)
class WindowView:
    """One window of a graph: a time interval plus its contiguous edge ids."""

    graph: TemporalGraph
    index: int
    lo: int
    hi: int
    start: int
    stop: int

    @property
    def size(self) -> int:
        return self.stop - self.start

    def edge_ids(self) -> range:
        return range(self.start, self.stop)

    def candidate_list(self, e, anchor: str, alpha: str, beta: str, delta: int):
        return self.graph.candidate_list(e, anchor, alpha, beta, delta,
                                         window=(self.lo, self.hi))


def partition_windows(graph: TemporalGraph, delta: int) -> WindowPartition:
    """Cut [0, t_max] into ceil(span/delta) windows of length 2*delta.

    The last window runs past t_max rather than shrinking, so every window
    has the full 2*delta length the overlap-correction logic assumes.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if graph.m == 0:
        raise ValueError("cannot partition an empty graph")
    q = max(1, -(-graph.t_max // delta))
    bounds = tuple((i * delta, (i + 2) * delta) for i in range(q))
    starts = np.searchsorted(graph.ts, [b[0] for b in bounds], side="left")
    stops = np.searchsorted(graph.ts, [b[1] for b in bounds], side="right")
    ranges = tuple((int(a), int(b)) for a, b in zip(starts, stops))
    return WindowPartition(delta, q, bounds, ranges)


def _single_window(graph: TemporalGraph, delta: int) -> WindowPartition:
    # constraint-ablation hook: no windowing, one interval covering everything
    if graph.m == 0:
        raise ValueError("cannot partition an empty graph")
    return WindowPartition(delta, 1, ((0, graph.t_max),), ((0, graph.m),),
                           regular=False)


class _PackedTree:
    """Flat-array form of a rooted tree, shared by every kernel."""

    def __init__(self, tree: SpanningTree):
        motif = tree.motif
        edges = tree.edges
        self.n_slots = len(edges)
        slot_of = {e: i for i, e in enumerate(edges)}
        self.slot_edge = np.asarray(edges, dtype=np.int64)
        self.center_slot = slot_of[tree.center]
        self.center_src, self.center_dst = motif.edges[tree.center]

        heights = [tree.height[e] for e in edges]
        tree_h = max(heights)
        level_slots: list[int] = []
        level_off = [0]
        for h in range(1, tree_h + 1):
            level_slots.extend(i for i in range(self.n_slots) if heights[i] == h)
            level_off.append(len(level_slots))
        self.level_slots = np.asarray(level_slots, dtype=np.int64)
        self.level_off = np.asarray(level_off, dtype=np.int64)
        self.desc_slots = np.asarray(
            sorted(range(self.n_slots), key=lambda i: (-heights[i], i)),
            dtype=np.int64)
        self.leaf_slots = [i for i in range(self.n_slots) if not tree.deps[edges[i]]]

        trip_off = [0]
        child, alpha, beta, anchor_src = [], [], [], []
        slot_far = np.full(self.n_slots, -1, dtype=np.int64)
        for e in edges:
            for trip in tree.deps[e]:
                cs = slot_of[trip.child]
                child.append(cs)
                alpha.append(0 if trip.alpha == "out" else 1)
                beta.append(0 if trip.beta == "before" else 1)
                anchor_src.append(1 if trip.anchor == motif.edges[e][0] else 0)
                cx, cy = motif.edges[trip.child]
                slot_far[cs] = cy if cx == trip.anchor else cx
            trip_off.append(len(child))
        self.trip_off = np.asarray(trip_off, dtype=np.int64)
        self.trip_child = np.asarray(child, dtype=np.int64)
        self.trip_alpha = np.asarray(alpha, dtype=np.uint8)
        self.trip_beta = np.asarray(beta, dtype=np.uint8)
        self.trip_anchor_src = np.asarray(anchor_src, dtype=np.uint8)
        self.slot_far = slot_far

        # non-tree pattern edges (in time order) with their bracketing slots;
        # slots are sorted by pattern edge index so slot order is time order
        in_tree = set(edges)
        nt = [i for i in range(motif.size) if i not in in_tree]
        self.nt_src = np.asarray([motif.edges[i][0] for i in nt],
                                 dtype=np.int64).reshape(len(nt))
        self.nt_dst = np.asarray([motif.edges[i][1] for i in nt],
                                 dtype=np.int64).reshape(len(nt))
        prev = [max((slot_of[e] for e in edges if e < i), default=-1) for i in nt]
        nxt = [min((slot_of[e] for e in edges if e > i), default=-1) for i in nt]
        self.nt_prev = np.asarray(prev, dtype=np.int64).reshape(len(nt))
        self.nt_next = np.asarray(nxt, dtype=np.int64).reshape(len(nt))
        gap_off = [0]
        for j in range(1, len(nt)):
            if prev[j] != prev[j - 1]:
                gap_off.append(j)
        gap_off.append(len(nt))
        self.gap_off = np.asarray(sorted(set(gap_off)), dtype=np.int64)
        self.n_vertices = motif.k


@dataclass
class WeightTable:
    """Per-window, per-tree-edge sampling weights plus the cumulative index.

    `w[slot, entry]` packs window entries back to back (`entry_off` slices
    out each window); leaf tree edges hold the constant 1.  `window_totals`
    are exact ints unless `overflowed` is non-empty, in which case the whole
    table switched to float64.
    """

    tree: SpanningTree
    graph: TemporalGraph
    partition: WindowPartition
    use_c2: bool
    use_c3: bool
    w: np.ndarray
    ccum: np.ndarray
    win_w: np.ndarray
    entry_off: np.ndarray
    entry_win: np.ndarray
    win_lo: np.ndarray
    win_hi: np.ndarray
    win_first: np.ndarray
    window_totals: tuple
    total: object
    overflowed: tuple[int, ...]
    scan_ops: int
    packed: _PackedTree

    @property
    def motif(self) -> Motif:
        return self.tree.motif

    @property
    def delta(self) -> int:
        return self.partition.delta

    def window_weights(self, i: int) -> Mapping[int, np.ndarray]:
        """Weights of window i keyed by motif edge index (leaf rows are 1)."""
        a, b = int(self.entry_off[i]), int(self.entry_off[i + 1])
        return {int(e): self.w[s, a:b]
                for s, e in enumerate(self.packed.slot_edge)}

    def entries_total(self) -> int:
        return int(self.w.shape[0] * self.w.shape[1])


def _run_table(packed: _PackedTree, graph: TemporalGraph,
               partition: WindowPartition, delta: int, use_c2: bool,
               dtype, cap):
    q = partition.count
    sizes = [b - a for a, b in partition.edge_ranges]
    entry_off = np.zeros(q + 1, dtype=np.int64)
    np.cumsum(sizes, out=entry_off[1:])
    n_entries = int(entry_off[-1])
    entry_win = np.repeat(np.arange(q, dtype=np.int64), sizes)
    win_lo = np.asarray([b[0] for b in partition.bounds], dtype=np.int64)
    win_hi = np.asarray([b[1] for b in partition.bounds], dtype=np.int64)
    win_first = np.asarray([r[0] for r in partition.edge_ranges], dtype=np.int64)

    w = np.zeros((packed.n_slots, n_entries), dtype=dtype)
    for s in packed.leaf_slots:
        w[s, :] = 1
    ofl = np.zeros(n_entries, dtype=np.uint8)
    scan = np.zeros(n_entries, dtype=np.int64)
    _kernels.weight_table(
        graph.ts, graph.src, graph.dst,
        graph.out_off, graph.out_ts, graph.out_eid, graph.out_dst,
        graph.in_off, graph.in_ts, graph.in_eid, graph.in_src,
        win_lo, win_hi, win_first, entry_off, entry_win,
        packed.level_slots, packed.level_off,
        packed.trip_off, packed.trip_child, packed.trip_alpha,
        packed.trip_beta, packed.trip_anchor_src,
        delta, use_c2, cap, w, ofl, scan)

    ccum = np.empty(n_entries, dtype=dtype)
    win_w = np.empty(q, dtype=dtype)
    overflowed = set()
    for i in range(q):
        a, b = int(entry_off[i]), int(entry_off[i + 1])
        total = _kernels.guarded_cumsum(w[packed.center_slot, a:b], ccum[a:b], cap)
        win_w[i] = total
        if total > cap:
            overflowed.add(i)
        if ofl[a:b].any():
            overflowed.add(i)
    return (w, ccum, win_w, entry_off, entry_win, win_lo, win_hi, win_first,
            sorted(overflowed), int(scan.sum()))


def preprocess(tree: SpanningTree, graph: TemporalGraph, delta: int | None = None,
               use_c2: bool = True, use_c3: bool = True) -> WeightTable:
    """Partition the graph and compute the full weight table for `tree`.

    The grand total counts partial matches with window multiplicity: a match
    inside two overlapping windows contributes to both window totals, which
    the per-sample window-count division later corrects.
    """
    if delta is None:
        delta = tree.motif.delta
    partition = (partition_windows(graph, delta) if use_c3
                 else _single_window(graph, delta))
    packed = _PackedTree(tree)
    res = _run_table(packed, graph, partition, delta, use_c2,
                     np.int64, int(_kernels._CAP))
    overflowed = tuple(res[8])
    if overflowed:
        res = _run_table(packed, graph, partition, delta, use_c2,
                         np.float64, _kernels._CAPF)
        totals = tuple(float(x) for x in res[2])
        total = float(sum(totals))
    else:
        totals = tuple(int(x) for x in res[2])
        total = sum(totals)
    w, ccum, win_w, entry_off, entry_win, win_lo, win_hi, win_first, _, scans = res
    return WeightTable(tree=tree, graph=graph, partition=partition,
                       use_c2=use_c2, use_c3=use_c3, w=w, ccum=ccum, win_w=win_w,
                       entry_off=entry_off, entry_win=entry_win, win_lo=win_lo,
                       win_hi=win_hi, win_first=win_first, window_totals=totals,
                       total=total, overflowed=overflowed, scan_ops=scans,
                       packed=packed)


def preprocess_subgraph(tree: SpanningTree, view: WindowView,
                        use_c2: bool = True):
    """Weights for a single window; returns (window total, weights by edge).

    Mostly a testing and inspection surface; `preprocess` computes all
    windows in one pass.
    """
    delta = tree.motif.delta
    part = WindowPartition(delta, 1, ((view.lo, view.hi),),
                           ((view.start, view.stop),), regular=False)
    packed = _PackedTree(tree)
    res = _run_table(packed, view.graph, part, delta, use_c2,
                     np.int64, int(_kernels._CAP))
    if res[8]:
        res = _run_table(packed, view.graph, part, delta, use_c2,
                         np.float64, _kernels._CAPF)
        total = float(res[2][0])
    else:
        total = int(res[2][0])
    w, entry_off = res[0], res[3]
    weights = {int(e): w[s, int(entry_off[0]):int(entry_off[1])]
               for s, e in enumerate(packed.slot_edge)}
    return total, weights
