"""Timestamped directed multigraph with time-indexed adjacency.

Edges are sorted by (timestamp, source, destination) at build time and get
dense ids in that order, so any closed time interval maps to a contiguous id
range.  Per-vertex in/out adjacency and per-ordered-pair multi-edge lists are
flat CSR arrays sorted by timestamp; every interval query is two binary
searches plus the output.  Graphs are immutable after construction and safe
to share between any number of reader threads.
"""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

logger = logging.getLogger(__name__)


class EdgeListParseError(ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass(frozen=True)
class TemporalEdge:
    """One directed timestamped edge. `id` is the dense time-sorted index."""

    id: int
    src: int
    dst: int
    t: int


class TemporalGraph:
    """Immutable temporal multigraph over dense vertex ids 0..n-1.

    Timestamps are shifted at build time so the earliest edge sits at t=0;
    the applied shift is kept in `t_shift` and original vertex labels in
    `original_ids` for reporting.
    """

    def __init__(self, src: np.ndarray, dst: np.ndarray, ts: np.ndarray,
                 original_ids: np.ndarray, t_shift: int,
                 duplicates_dropped: int = 0, self_loops_dropped: int = 0):
        self.m = int(len(ts))
        self.n = int(len(original_ids))
        self.src = src
        self.dst = dst
        self.ts = ts
        self.original_ids = original_ids
        self.t_shift = int(t_shift)
        self.duplicates_dropped = duplicates_dropped
        self.self_loops_dropped = self_loops_dropped
        self.t_min = 0
        self.t_max = int(ts[-1]) if self.m else 0
        self._build_indexes()

    # ---- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int, int]],
                   self_loops_dropped: int = 0) -> "TemporalGraph":
        """Build from (src, dst, t) triples with arbitrary integer labels.

        Self-loops must already be filtered out (the loader does that);
        duplicate (src, dst, t) triples are dropped here with a count.
        """
        rows = np.asarray(list(edges), dtype=np.int64).reshape(-1, 3)
        if rows.size == 0:
            return cls(np.empty(0, np.int64), np.empty(0, np.int64),
                       np.empty(0, np.int64), np.empty(0, np.int64), 0,
                       0, self_loops_dropped)
        uniq = np.unique(rows, axis=0)
        dups = len(rows) - len(uniq)
        if dups:
            logger.warning("dropped %d duplicate edge tuples", dups)
        src, dst, ts = uniq[:, 0], uniq[:, 1], uniq[:, 2]

        labels = np.unique(np.concatenate([src, dst]))
        src = np.searchsorted(labels, src).astype(np.int64)
        dst = np.searchsorted(labels, dst).astype(np.int64)

        t_shift = int(ts.min())
        ts = ts - t_shift
        order = np.lexsort((dst, src, ts))
        return cls(np.ascontiguousarray(src[order]),
                   np.ascontiguousarray(dst[order]),
                   np.ascontiguousarray(ts[order]),
                   labels, t_shift, dups, self_loops_dropped)

    def _build_indexes(self) -> None:
        n, m = self.n, self.m
        eids = np.arange(m, dtype=np.int64)

        def csr(key: np.ndarray, other: np.ndarray):
            order = np.lexsort((eids, self.ts, key))
            off = np.zeros(n + 1, dtype=np.int64)
            np.add.at(off, key + 1, 1)
            np.cumsum(off, out=off)
            return (off, np.ascontiguousarray(self.ts[order]),
                    np.ascontiguousarray(eids[order]),
                    np.ascontiguousarray(other[order]))

        self.out_off, self.out_ts, self.out_eid, self.out_dst = csr(self.src, self.dst)
        self.in_off, self.in_ts, self.in_eid, self.in_src = csr(self.dst, self.src)

        # multi-edge lists keyed by the ordered pair, packed as (u << 32) | v
        keys = (self.src << np.int64(32)) | self.dst
        order = np.lexsort((eids, self.ts, keys))
        sorted_keys = keys[order]
        self.pair_ts = np.ascontiguousarray(self.ts[order])
        self.pair_eid = np.ascontiguousarray(eids[order])
        self.pair_keys, starts = np.unique(sorted_keys, return_index=True)
        self.pair_off = np.append(starts, m).astype(np.int64)

    # ---- basic accessors ---------------------------------------------------

    def edge(self, i: int) -> TemporalEdge:
        return TemporalEdge(int(i), int(self.src[i]), int(self.dst[i]), int(self.ts[i]))

    def edges(self) -> list[TemporalEdge]:
        return [self.edge(i) for i in range(self.m)]

    def vertex_id(self, original: int) -> int:
        """Dense id for an original vertex label; raises KeyError if absent."""
        i = int(np.searchsorted(self.original_ids, original))
        if i >= self.n or self.original_ids[i] != original:
            raise KeyError(original)
        return i

    def original_id(self, v: int) -> int:
        return int(self.original_ids[v])

    def _pair_range(self, u: int, v: int) -> tuple[int, int]:
        key = (u << 32) | v
        i = int(np.searchsorted(self.pair_keys, key))
        if i >= len(self.pair_keys) or self.pair_keys[i] != key:
            return 0, 0
        return int(self.pair_off[i]), int(self.pair_off[i + 1])

    def max_degree(self) -> int:
        """Largest total (in + out) vertex degree; 0 on an empty graph."""
        if self.n == 0:
            return 0
        return int(np.max(np.diff(self.out_off) + np.diff(self.in_off)))

    # ---- interval queries (all intervals closed on both ends) ---------------

    def temporal_list(self, v: int, direction: str, lo: int, hi: int) -> list[TemporalEdge]:
        """Edges incident on v (direction "out" or "in") with t in [lo, hi]."""
        if lo > hi:
            raise ValueError("lo must be <= hi")
        if v < 0 or v >= self.n:
            return []
        if direction == "out":
            off, ts, eid = self.out_off, self.out_ts, self.out_eid
        elif direction == "in":
            off, ts, eid = self.in_off, self.in_ts, self.in_eid
        else:
            raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")
        a, b = off[v], off[v + 1]
        i = a + np.searchsorted(ts[a:b], lo, side="left")
        j = a + np.searchsorted(ts[a:b], hi, side="right")
        return [self.edge(e) for e in eid[i:j]]

    def multiedge_list(self, u: int, v: int, direction: str, lo: int, hi: int) -> list[TemporalEdge]:
        """Parallel edges of the ordered pair, forward = u->v, backward = v->u."""
        if lo > hi:
            raise ValueError("lo must be <= hi")
        if u == v:
            raise ValueError("u and v must differ")
        if direction == "backward":
            u, v = v, u
        elif direction != "forward":
            raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")
        if min(u, v) < 0 or max(u, v) >= self.n:
            return []
        a, b = self._pair_range(u, v)
        i = a + np.searchsorted(self.pair_ts[a:b], lo, side="left")
        j = a + np.searchsorted(self.pair_ts[a:b], hi, side="right")
        return [self.edge(e) for e in self.pair_eid[i:j]]

    def multiplicity(self, u: int, v: int, lo: int, hi: int) -> int:
        """Number of u->v edges with t in [lo, hi]."""
        if lo > hi:
            raise ValueError("lo must be <= hi")
        if u == v or min(u, v) < 0 or max(u, v) >= self.n:
            return 0
        a, b = self._pair_range(u, v)
        i = np.searchsorted(self.pair_ts[a:b], lo, side="left")
        j = np.searchsorted(self.pair_ts[a:b], hi, side="right")
        return int(j - i)

    def candidate_list(self, e: TemporalEdge | int, anchor: str, alpha: str,
                       beta: str, delta: int, window: tuple[int, int]) -> list[TemporalEdge]:
        """Edges that can match a dependent tree edge hanging off `e`.

        The anchor endpoint of `e` contributes its in/out adjacency (alpha)
        over [t-delta, t] or [t, t+delta] (beta), clipped to the window.
        Edges running between the two endpoints of `e` are excluded so an
        adjacent match never shares both vertices; this drops `e` itself too.
        """
        if delta <= 0:
            raise ValueError("delta must be positive")
        if isinstance(e, int):
            e = self.edge(e)
        if anchor == "src":
            u, v = e.src, e.dst
        elif anchor == "dst":
            u, v = e.dst, e.src
        else:
            raise ValueError(f"anchor must be 'src' or 'dst', got {anchor!r}")
        if beta == "before":
            lo, hi = e.t - delta, e.t
        elif beta == "after":
            lo, hi = e.t, e.t + delta
        else:
            raise ValueError(f"beta must be 'before' or 'after', got {beta!r}")
        lo, hi = max(lo, window[0]), min(hi, window[1])
        if lo > hi:
            return []
        return [c for c in self.temporal_list(u, alpha, lo, hi)
                if (c.dst if alpha == "out" else c.src) != v]


def load_graph(source) -> TemporalGraph:
    """Parse an edge-list stream: one "src dst t" line per edge, '#' comments.

    Accepts bytes, str, or a file-like object.  Malformed lines and negative
    timestamps raise EdgeListParseError with the line number; self-loops are
    skipped with a warning and duplicates are dropped with a count (both
    surfaced on the returned graph).
    """
    if isinstance(source, bytes):
        lines = io.StringIO(source.decode("ascii"))
    elif isinstance(source, str):
        lines = io.StringIO(source)
    else:
        lines = io.TextIOWrapper(source, "ascii") if isinstance(source.read(0), bytes) else source

    edges = []
    self_loops = 0
    for lineno, line in enumerate(lines, start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 3:
            raise EdgeListParseError(lineno, f"expected 'src dst t', got {body!r}")
        try:
            u, v, t = (int(p) for p in parts)
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer field in {body!r}") from None
        if t < 0:
            raise EdgeListParseError(lineno, f"negative timestamp {t}")
        if u == v:
            logger.warning("line %d: skipping self-loop at vertex %d", lineno, u)
            self_loops += 1
            continue
        edges.append((u, v, t))
    return TemporalGraph.from_edges(edges, self_loops_dropped=self_loops)
