"""Validation of sampled tree matches and exact extension counting.

A sampled partial match only honours the relaxed constraints; here it is
checked against the full pattern requirements (injective vertex map, global
delta span, strict time order), its window multiplicity is determined for
the overlap correction, and the number of full-motif matches extending it is
counted without enumerating them: per non-tree pattern edge, candidates are
the parallel edges between the mapped endpoints inside strict time bounds,
and strictly-increasing picks across the lists of a time-order gap are
counted by a merged-traversal dynamic program.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import Sequence

from .graph import TemporalGraph
from .motif import Motif, SpanningTree
from .preprocess import WindowPartition
from .sampling import PartialMatch


class ViolationKind(enum.Enum):
    """Why a sampled match failed full validation (the tally categories)."""

    VERTEX_MAP = "vertex_map"
    DELTA_INTERVAL = "delta_interval"
    EDGE_ORDER = "edge_order"


def validate(match: PartialMatch, motif: Motif) -> ViolationKind | None:
    """First failing full-motif check, or None if the tree part is valid.

    Checks run in tally order: vertex-map injectivity, then the delta span
    over the sampled timestamps, then strict time order along the pattern's
    edge order restricted to tree edges (ties count as order failures).
    """
    values = list(match.vertex_map.values())
    if len(set(values)) != len(values):
        return ViolationKind.VERTEX_MAP
    times = match.timestamps()
    if max(times) - min(times) > motif.delta:
        return ViolationKind.DELTA_INTERVAL
    prev = None
    for midx in sorted(match.edges):
        t = match.edges[midx].t
        if prev is not None and t <= prev:
            return ViolationKind.EDGE_ORDER
        prev = t
    return None


def compute_n_phi(match: PartialMatch, partition: WindowPartition) -> int:
    """Number of windows containing every sampled timestamp."""
    times = match.timestamps()
    return partition.containing_count(min(times), max(times))


def list_count(lists: Sequence[Sequence[int]]) -> int:
    """Tuples picking one timestamp per list, strictly increasing across
    consecutive lists.  Merged traversal, never the cross product."""
    if not lists:
        return 1
    if any(len(lst) == 0 for lst in lists):
        return 0
    counts = [1] * len(lists[0])
    for prev, cur in zip(lists, lists[1:]):
        nxt = []
        acc = 0
        p = 0
        for t in cur:
            while p < len(prev) and prev[p] < t:
                acc += counts[p]
                p += 1
            nxt.append(acc)
        counts = nxt
    return sum(counts)


def _chains_by_first(lists: Sequence[Sequence[int]]) -> list[int]:
    """Per element of the first list: chains through the remaining lists."""
    counts = [1] * len(lists[-1])
    for prev, cur in zip(reversed(lists), list(reversed(lists))[1:]):
        nxt = []
        acc = 0
        p = len(prev) - 1
        for t in reversed(cur):
            while p >= 0 and prev[p] > t:
                acc += counts[p]
                p -= 1
            nxt.append(acc)
        counts = list(reversed(nxt))
    return counts


def _chains_by_last(lists: Sequence[Sequence[int]]) -> list[int]:
    """Per element of the last list: chains reaching it from the first."""
    counts = [1] * len(lists[0])
    for prev, cur in zip(lists, lists[1:]):
        nxt = []
        acc = 0
        p = 0
        for t in cur:
            while p < len(prev) and prev[p] < t:
                acc += counts[p]
                p += 1
            nxt.append(acc)
        counts = nxt
    return counts


def derive_count(motif: Motif, tree: SpanningTree, match: PartialMatch,
                 graph: TemporalGraph) -> int:
    """Exact number of full-motif matches extending a validated tree match.

    Every non-tree pattern edge draws its candidates from the multi-edge
    list between its mapped endpoints, strictly between the timestamps of
    the neighbouring sampled tree edges in time order; the open first/last
    ends clip against the delta window anchored at the sampled extremes.
    Gaps between consecutive tree positions are independent and multiply,
    except that when both the earliest and the latest pattern edges are
    non-tree, their joint span cap couples the first and last gaps.
    """
    in_tree = set(tree.edges)
    non_tree = [i for i in range(motif.size) if i not in in_tree]
    if not non_tree:
        return 1
    for v in range(motif.k):
        if v not in match.vertex_map:
            raise RuntimeError(f"tree does not cover pattern vertex {v}")
    times = match.timestamps()
    t_min_s, t_max_s = min(times), max(times)
    tree_sorted = sorted(tree.edges)

    gaps: list[dict] = []
    for idx in non_tree:
        prev = max((e for e in tree_sorted if e < idx), default=None)
        nxt = min((e for e in tree_sorted if e > idx), default=None)
        lo = match.edges[prev].t + 1 if prev is not None else t_max_s - motif.delta
        hi = match.edges[nxt].t - 1 if nxt is not None else t_min_s + motif.delta
        if lo > hi:
            return 0
        x, y = motif.edges[idx]
        cand = [e.t for e in graph.multiedge_list(
            match.vertex_map[x], match.vertex_map[y], "forward", lo, hi)]
        if not cand:
            return 0
        if gaps and gaps[-1]["prev"] == prev:
            gaps[-1]["lists"].append(cand)
        else:
            gaps.append({"prev": prev, "next": nxt, "lists": [cand]})

    first_open = gaps[0]["prev"] is None
    last_open = gaps[-1]["next"] is None
    coupled = first_open and last_open
    total = 1
    inner = gaps[1:-1] if coupled else gaps
    for gap in inner:
        c = list_count(gap["lists"])
        if c == 0:
            return 0
        total *= c
    if coupled:
        by_first = _chains_by_first(gaps[0]["lists"])
        by_last = _chains_by_last(gaps[-1]["lists"])
        first_times = gaps[0]["lists"][0]
        last_times = gaps[-1]["lists"][-1]
        prefix = [0]
        for c in by_last:
            prefix.append(prefix[-1] + c)
        pair_total = 0
        p = 0
        for t, c in zip(first_times, by_first):
            limit = t + motif.delta
            while p < len(last_times) and last_times[p] <= limit:
                p += 1
            pair_total += c * prefix[p]
        if pair_total == 0:
            return 0
        total *= pair_total
    return total


def validate_and_derive(motif: Motif, tree: SpanningTree, match: PartialMatch,
                        partition: WindowPartition, graph: TemporalGraph,
                        tally: dict | None = None) -> Fraction:
    """0 for invalid samples, else extensions / window multiplicity, exact."""
    kind = validate(match, motif)
    if kind is not None:
        if tally is not None:
            tally[kind.value] = tally.get(kind.value, 0) + 1
        return Fraction(0)
    if tally is not None:
        tally["valid"] = tally.get("valid", 0) + 1
    n_phi = compute_n_phi(match, partition)
    return Fraction(derive_count(motif, tree, match, graph), n_phi)
