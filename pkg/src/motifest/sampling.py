"""Weighted top-down sampling of tree matches.

Draws are keyed by a counter-based splitmix64 stream: draw i of seed s sees
the same uniforms no matter which thread or batch produces it, so sample
streams are reproducible and independent of worker count.  A draw picks the
window (mass proportional to its total weight), then the center edge (mass
proportional to its center weight), then walks the tree from the root,
materialising each dependency's candidate list by binary search and picking
a child with probability proportional to its subtree weight.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import _kernels
from .graph import TemporalEdge
from .preprocess import WeightTable, WindowView


@dataclass(frozen=True)
class PartialMatch:
    """A sampled assignment of graph edges to the tree edges.

    `edges` maps motif edge index -> sampled TemporalEdge, `vertex_map` motif
    vertex -> graph vertex, `edge_map` motif edge index -> graph edge id.
    """

    edges: Mapping[int, TemporalEdge]
    vertex_map: Mapping[int, int]
    edge_map: Mapping[int, int]
    window_index: int

    def timestamps(self) -> list[int]:
        return [e.t for e in self.edges.values()]


class SampleStream:
    """Counter-based random stream; each draw consumes one counter value.

    Two streams with the same seed yield the same draw sequence; a stream can
    be started at any counter, which is how workers split one logical stream.
    """

    def __init__(self, seed: int, start: int = 0):
        self.seed = seed & 0xFFFFFFFFFFFFFFFF
        self.index = start

    def take(self) -> int:
        i = self.index
        self.index += 1
        return i


_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def draw_uniform(seed: int, draw: int, skip: int = 0) -> float:
    """The (skip+1)-th uniform of a draw; mirrors the kernel stream exactly."""
    state = _mix64((seed + _GOLDEN * (draw + 1)) & _MASK)
    for _ in range(skip + 1):
        state = (state + _GOLDEN) & _MASK
        value = _mix64(state)
    return (value >> 11) * (1.0 / 9007199254740992.0)


def sample_window(table: WeightTable, stream: SampleStream) -> int:
    """Pick a window index with probability proportional to its total weight."""
    if not table.total > 0:
        raise ValueError("total weight is zero; nothing to sample")
    u = draw_uniform(stream.seed, stream.take())
    target = u * float(table.total)
    acc = 0.0
    for i, wi in enumerate(table.window_totals):
        acc += float(wi)
        if acc > target:
            return i
    return len(table.window_totals) - 1


def sample_partial_match(tree, view: WindowView, table: WeightTable,
                         stream: SampleStream) -> PartialMatch:
    """Draw one partial match from the given window.

    The returned match always satisfies the relaxed constraints the table was
    built with; full motif validity is the counter module's job.
    """
    if not float(table.window_totals[view.index]) > 0:
        raise ValueError(f"window {view.index} has zero weight")
    graph = table.graph
    packed = table.packed
    cap = _kernels._CAPF if table.overflowed else int(_kernels._CAP)
    picks = np.empty(packed.n_slots, dtype=np.int64)
    fault = _kernels.sample_one(
        np.uint64(stream.seed), stream.take(), view.index,
        graph.ts, graph.src, graph.dst,
        graph.out_off, graph.out_ts, graph.out_eid, graph.out_dst,
        graph.in_off, graph.in_ts, graph.in_eid, graph.in_src,
        table.win_lo, table.win_hi, table.win_first, table.entry_off,
        table.win_w, table.ccum, table.w, cap,
        packed.center_slot, packed.center_src, packed.center_dst,
        packed.desc_slots, packed.slot_far,
        packed.trip_off, packed.trip_child, packed.trip_alpha,
        packed.trip_beta, packed.trip_anchor_src,
        table.delta, table.use_c2, packed.n_vertices, picks)
    if fault:
        raise RuntimeError("internal consistency fault: empty candidate list "
                           "under positive parent weight")
    return _match_from_picks(table, view.index, picks)


def _match_from_picks(table: WeightTable, window_index: int,
                      row: np.ndarray) -> PartialMatch:
    graph = table.graph
    motif = table.motif
    packed = table.packed
    edges = {}
    vmap = {}
    emap = {}
    for s in range(packed.n_slots):
        midx = int(packed.slot_edge[s])
        e = graph.edge(int(row[s]))
        edges[midx] = e
        emap[midx] = e.id
        x, y = motif.edges[midx]
        vmap[x] = e.src
        vmap[y] = e.dst
    match = PartialMatch(edges=edges, vertex_map=vmap, edge_map=emap,
                         window_index=window_index)
    _assert_match_invariants(table, match)
    return match


def _assert_match_invariants(table: WeightTable, match: PartialMatch) -> None:
    motif = table.motif
    tree = table.tree
    lo, hi = table.partition.bounds[match.window_index]
    for midx, e in match.edges.items():
        x, y = motif.edges[midx]
        assert match.vertex_map[x] == e.src and match.vertex_map[y] == e.dst
        assert lo <= e.t <= hi, "sampled edge left its window"
    for midx, e in match.edges.items():
        for trip in tree.deps[midx]:
            c = match.edges[trip.child]
            if trip.beta == "before":
                assert e.t - table.delta <= c.t <= e.t, "child off its time side"
            else:
                assert e.t <= c.t <= e.t + table.delta, "child off its time side"
            if table.use_c2:
                shared = {e.src, e.dst} & {c.src, c.dst}
                assert len(shared) == 1, "adjacent edges must share one vertex"


def _run_sample_batch(table: WeightTable, k: int, seed: int,
                      draw_base: int = 0, fixed_window: int | None = None,
                      allocation: np.ndarray | None = None):
    """Record window and edge picks for k draws; thin host wrapper."""
    graph = table.graph
    packed = table.packed
    q = table.partition.count
    if allocation is None:
        allocation = np.zeros(q, dtype=np.int64)
        if fixed_window is None:
            raise ValueError("need an allocation or a fixed window")
        allocation[fixed_window] = k
    draw_off = np.zeros(q + 1, dtype=np.int64)
    np.cumsum(allocation, out=draw_off[1:])

    wins = np.empty(k, dtype=np.int64)
    picks = np.empty((k, packed.n_slots), dtype=np.int64)
    n_chunks = max(1, min(k, 256))
    fault = np.zeros(n_chunks, dtype=np.int64)
    cap = _kernels._CAPF if table.overflowed else int(_kernels._CAP)
    _kernels.sample_batch(
        np.uint64(seed), draw_base, k, draw_off,
        graph.ts, graph.src, graph.dst,
        graph.out_off, graph.out_ts, graph.out_eid, graph.out_dst,
        graph.in_off, graph.in_ts, graph.in_eid, graph.in_src,
        table.win_lo, table.win_hi, table.win_first, table.entry_off,
        table.win_w, table.ccum, table.w, cap,
        packed.center_slot, packed.center_src, packed.center_dst,
        packed.desc_slots, packed.slot_far,
        packed.trip_off, packed.trip_child, packed.trip_alpha,
        packed.trip_beta, packed.trip_anchor_src,
        table.delta, table.use_c2, packed.n_vertices, n_chunks,
        wins, picks, fault)
    return wins, picks, int(fault.sum())
