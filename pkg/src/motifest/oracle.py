"""Exact temporal motif counting and the literal brute-force references.

`exact_count` is the production exact mode: a chronological backtracker that
extends matches edge by edge in the required time order, pruning with binary
searches on the closing time bound.  The two brute-force routines below it
exist to check everything else and are deliberately literal; they refuse
inputs beyond verification scale.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from . import _kernels
from .graph import TemporalGraph
from .motif import Motif, SpanningTree
from .preprocess import WindowView

_BRUTE_EDGE_LIMIT = 300
_BRUTE_MOTIF_LIMIT = 6
_BRUTE_TUPLE_BUDGET = 50_000_000


def exact_count(motif: Motif, graph: TemporalGraph, threads: int = 1) -> int:
    """Exact number of motif matches (injective maps, strict time order,
    span at most delta).  Intended for verification-scale inputs; cost grows
    with the number of partial time-ordered prefixes."""
    if graph.m == 0:
        return 0
    me_src = np.asarray([x for x, _ in motif.edges], dtype=np.int64)
    me_dst = np.asarray([y for _, y in motif.edges], dtype=np.int64)
    n_chunks = max(1, min(graph.m, int(threads) * 64))
    counts = np.zeros(n_chunks, dtype=np.int64)
    _set_threads(threads)
    _kernels.exact_backtrack(
        graph.ts, graph.src, graph.dst,
        graph.out_off, graph.out_ts, graph.out_eid, graph.out_dst,
        graph.in_off, graph.in_ts, graph.in_eid, graph.in_src,
        me_src, me_dst, motif.k, motif.delta, n_chunks, counts)
    total = int(counts.sum(dtype=np.int64))
    if total < 0:
        raise OverflowError("match count exceeds 64-bit range")
    return total


def _set_threads(threads: int) -> None:
    import numba
    limit = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(max(1, min(int(threads), limit)))


def _match_predicate(motif: Motif, graph: TemporalGraph,
                     tup: tuple[int, ...]) -> bool:
    # literal reading of the match definition on one ordered edge tuple
    prev_t = None
    phi: dict[int, int] = {}
    for (x, y), eid in zip(motif.edges, tup):
        t = int(graph.ts[eid])
        if prev_t is not None and t <= prev_t:
            return False
        prev_t = t
        u, v = int(graph.src[eid]), int(graph.dst[eid])
        if phi.setdefault(x, u) != u or phi.setdefault(y, v) != v:
            return False
    if int(graph.ts[tup[-1]]) - int(graph.ts[tup[0]]) > motif.delta:
        return False
    return len(set(phi.values())) == motif.k


def brute_force_count(motif: Motif, graph: TemporalGraph) -> int:
    """Enumerate ordered edge tuples and apply the match definition literally.

    Tuples are anchored at their earliest edge and restricted to its delta
    window (anything wider fails the span condition by construction), which
    keeps verification-scale runs tractable without losing literalness.
    """
    if graph.m > _BRUTE_EDGE_LIMIT:
        raise ValueError(f"brute force refuses graphs over {_BRUTE_EDGE_LIMIT} edges")
    if motif.size > _BRUTE_MOTIF_LIMIT:
        raise ValueError(f"brute force refuses motifs over {_BRUTE_MOTIF_LIMIT} edges")
    rest = motif.size - 1
    if rest == 0:
        return graph.m
    total = 0
    budget = 0
    for first in range(graph.m):
        t0 = int(graph.ts[first])
        hi = int(np.searchsorted(graph.ts, t0 + motif.delta, side="right"))
        window = range(first + 1, hi)
        if len(window) < rest:
            continue
        budget += _ncr(len(window), rest)
        if budget > _BRUTE_TUPLE_BUDGET:
            raise ValueError("instance too large for brute-force enumeration")
        for tail in combinations(window, rest):
            if _match_predicate(motif, graph, (first, *tail)):
                total += 1
    return total


def _ncr(n: int, r: int) -> int:
    out = 1
    for i in range(r):
        out = out * (n - i) // (i + 1)
    return out


def enumerate_partial_matches(tree: SpanningTree, view: WindowView,
                              use_c2: bool = True) -> list[tuple[int, ...]]:
    """All relaxed tree matches in a window, as edge-id tuples in slot order.

    Literal constraint checks against the already-placed parent only; no
    weights, no candidate-list machinery, so it is an independent reference
    for both the weight table and the sampler distribution.
    """
    graph = view.graph
    motif = tree.motif
    delta = motif.delta
    edges = tree.edges
    order = [edges.index(tree.center)]
    seen = {tree.center}
    # parent-first processing order
    frontier = [tree.center]
    while frontier:
        e = frontier.pop(0)
        for trip in tree.deps[e]:
            if trip.child not in seen:
                seen.add(trip.child)
                order.append(edges.index(trip.child))
                frontier.append(trip.child)
    trip_of = {trip.child: (e, trip) for e in edges for trip in tree.deps[e]}

    window_ids = list(view.edge_ids())
    results: list[tuple[int, ...]] = []
    assign: dict[int, int] = {}

    def place(pos: int) -> None:
        if pos == len(order):
            results.append(tuple(assign[e] for e in edges))
            return
        midx = edges[order[pos]]
        parent_midx, trip = trip_of[midx]
        pid = assign[parent_midx]
        pt = int(graph.ts[pid])
        pu, pv = int(graph.src[pid]), int(graph.dst[pid])
        px, py = motif.edges[parent_midx]
        anchor_graph = pu if trip.anchor == px else pv
        other_graph = pv if trip.anchor == px else pu
        for eid in window_ids:
            t = int(graph.ts[eid])
            if trip.beta == "before":
                if not (pt - delta <= t <= pt):
                    continue
            else:
                if not (pt <= t <= pt + delta):
                    continue
            u, v = int(graph.src[eid]), int(graph.dst[eid])
            at = u if trip.alpha == "out" else v
            far = v if trip.alpha == "out" else u
            if at != anchor_graph:
                continue
            if use_c2 and far == other_graph:
                continue
            assign[midx] = eid
            place(pos + 1)
        assign.pop(midx, None)

    for center_id in window_ids:
        assign[tree.center] = center_id
        place(1)
    return results


def brute_force_partial_matches(tree: SpanningTree, view: WindowView,
                                use_c2: bool = True) -> int:
    """Count of relaxed tree matches in a window (see enumerate version)."""
    if view.size > _BRUTE_EDGE_LIMIT:
        raise ValueError(f"brute force refuses windows over {_BRUTE_EDGE_LIMIT} edges")
    return len(enumerate_partial_matches(tree, view, use_c2=use_c2))
