"""Motif patterns and their rooted spanning trees.

A motif is a small directed pattern whose edge list order fixes the required
time order, together with a window length delta.  Counting works through a
spanning tree of the pattern rooted at a designated center edge; each
non-center tree edge carries a dependency triple telling the sampler which
adjacency of its parent to look in (direction at the shared vertex) and on
which side in time.  Tree choice matters a lot for estimator cost, so this
module also implements the two-stage selection heuristic: rank all rooted
trees by a cheap tightness score, then compare total sampling weight on the
actual graph for the few best.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .graph import TemporalGraph


class MotifError(ValueError):
    """Invalid motif description."""


@dataclass(frozen=True)
class Motif:
    """Directed pattern with edge-list position as the time order.

    `edges[i]` is the pattern edge required to be the (i+1)-th earliest in a
    match; all matched timestamps must span at most `delta`.
    """

    edges: tuple[tuple[int, int], ...]
    delta: int

    def __post_init__(self):
        if self.delta <= 0:
            raise MotifError("delta must be positive")
        if not self.edges:
            raise MotifError("motif needs at least one edge")
        verts = set()
        for x, y in self.edges:
            if x == y:
                raise MotifError(f"self-loop at pattern vertex {x}")
            if x < 0 or y < 0:
                raise MotifError("pattern vertices must be non-negative")
            verts.update((x, y))
        k = max(verts) + 1
        if verts != set(range(k)):
            missing = sorted(set(range(k)) - verts)
            raise MotifError(f"pattern vertex indices have gaps: missing {missing}")
        # undirected connectivity
        adj: dict[int, set[int]] = {v: set() for v in verts}
        for x, y in self.edges:
            adj[x].add(y)
            adj[y].add(x)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != verts:
            raise MotifError("pattern is disconnected")

    @property
    def k(self) -> int:
        """Number of pattern vertices."""
        return 1 + max(max(e) for e in self.edges)

    @property
    def size(self) -> int:
        return len(self.edges)


def parse_motif(source, delta: int) -> Motif:
    """Parse a motif stream: one "x y" pattern edge per line, in time order."""
    if isinstance(source, bytes):
        text = source.decode("ascii")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("ascii")
    edges = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise MotifError(f"line {lineno}: expected 'x y', got {body!r}")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise MotifError(f"line {lineno}: non-integer field in {body!r}") from None
        edges.append((x, y))
    return Motif(tuple(edges), delta)


@dataclass(frozen=True)
class DependencyTriple:
    """One child of a tree edge: who it is, and how it attaches.

    `alpha` is the child's direction at the vertex shared with its parent
    ("out" if the child leaves that vertex); `beta` says whether the child
    must precede or follow the parent in time, which is fixed by the motif's
    edge order.  `anchor` is the shared pattern vertex.
    """

    child: int
    alpha: str
    beta: str
    anchor: int


@dataclass(frozen=True, eq=False)
class SpanningTree:
    """Rooted spanning tree of a motif pattern.

    `edges` are the motif edge indices in the tree, `center` the root edge.
    `order[h]` lists tree edges of height h (leaves at 0); processing by
    ascending height never reads an uncomputed child weight, and descending
    height always samples a parent before its children.
    """

    motif: Motif
    edges: tuple[int, ...]
    center: int
    order: tuple[tuple[int, ...], ...]
    deps: Mapping[int, tuple[DependencyTriple, ...]]
    height: Mapping[int, int]
    parent: Mapping[int, int | None]
    looseness: int = 0

    def __eq__(self, other):
        return (isinstance(other, SpanningTree) and self.motif == other.motif
                and self.edges == other.edges and self.center == other.center)

    def describe(self) -> dict:
        return {"edges": list(self.edges), "center": self.center,
                "looseness": self.looseness}


def _shared_vertex(a: tuple[int, int], b: tuple[int, int]) -> int:
    common = set(a) & set(b)
    if len(common) != 1:
        raise MotifError(f"edges {a} and {b} must share exactly one vertex")
    return common.pop()


def build_rooted_tree(motif: Motif, edge_set: Sequence[int], center: int) -> SpanningTree:
    """Root `edge_set` at `center` and derive heights and dependency lists."""
    edge_set = tuple(sorted(edge_set))
    if center not in edge_set:
        raise MotifError("center must belong to the tree edge set")
    incident: dict[int, list[int]] = {}
    for idx in edge_set:
        for v in motif.edges[idx]:
            incident.setdefault(v, []).append(idx)

    parent: dict[int, int | None] = {center: None}
    children: dict[int, list[int]] = {idx: [] for idx in edge_set}
    anchor: dict[int, int] = {}
    frontier = [(center, motif.edges[center][0]), (center, motif.edges[center][1])]
    while frontier:
        upper, at = frontier.pop(0)
        for idx in incident[at]:
            if idx in parent:
                continue
            parent[idx] = upper
            children[upper].append(idx)
            anchor[idx] = at
            x, y = motif.edges[idx]
            frontier.append((idx, y if x == at else x))
    if len(parent) != len(edge_set):
        raise MotifError("edge set does not form a connected tree")

    height: dict[int, int] = {}

    def h(idx: int) -> int:
        if idx not in height:
            height[idx] = 1 + max((h(c) for c in children[idx]), default=-1)
        return height[idx]

    h(center)
    tree_height = height[center]
    order = tuple(tuple(sorted(i for i in edge_set if height[i] == lvl))
                  for lvl in range(tree_height + 1))

    deps = {}
    for idx in edge_set:
        triples = []
        for c in sorted(children[idx]):
            at = anchor[c]
            cx, cy = motif.edges[c]
            triples.append(DependencyTriple(
                child=c,
                alpha="out" if cx == at else "in",
                beta="before" if c < idx else "after",
                anchor=at,
            ))
        deps[idx] = tuple(triples)

    tree = SpanningTree(motif=motif, edges=edge_set, center=center,
                        order=order, deps=deps, height=height, parent=parent)
    return SpanningTree(motif=motif, edges=edge_set, center=center,
                        order=order, deps=deps, height=height, parent=parent,
                        looseness=constraint_looseness(tree, motif))


def _is_spanning_tree(motif: Motif, edge_set: Sequence[int]) -> bool:
    # acyclic + covering all k vertices with k-1 edges, undirected sense
    parent = list(range(motif.k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for idx in edge_set:
        x, y = motif.edges[idx]
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        parent[rx] = ry
    return True


def enumerate_rooted_spanning_trees(motif: Motif) -> list[SpanningTree]:
    """All spanning trees of the pattern, once per choice of center edge.

    Enumeration order is deterministic: edge sets in lexicographic order of
    their sorted indices, centers ascending within each set.
    """
    trees = []
    for edge_set in combinations(range(motif.size), motif.k - 1):
        if not _is_spanning_tree(motif, edge_set):
            continue
        for center in edge_set:
            trees.append(build_rooted_tree(motif, edge_set, center))
    return trees


def constraint_looseness(tree: SpanningTree, motif: Motif) -> int:
    """Tightness score: how far apart in time order adjacent tree edges sit.

    For every pattern vertex and every unordered pair of incident tree
    edges, add |position difference - 1|; consecutive positions contribute
    nothing.  Lower scores mean tighter pairwise constraints and fewer
    spurious partial matches, so lower is preferred.
    """
    incident: dict[int, list[int]] = {}
    for idx in tree.edges:
        for v in motif.edges[idx]:
            incident.setdefault(v, []).append(idx)
    score = 0
    for pairs in incident.values():
        for a, b in combinations(sorted(pairs), 2):
            score += abs(b - a - 1)
    return score


def select_spanning_tree(motif: Motif, graph: TemporalGraph, n_candidates: int = 5,
                         use_c2: bool = True, use_c3: bool = True) -> SpanningTree:
    """Two-stage tree choice: shortlist by looseness, decide by total weight.

    The total sampling weight W of a finalist is the number of its relaxed
    tree matches in the graph, which is proportional to the samples needed
    for a given accuracy, so the finalist with the smallest W wins.  Ties at
    either stage break by enumeration order for reproducibility.
    """
    from .preprocess import preprocess

    if n_candidates < 1:
        raise ValueError("n_candidates must be >= 1")
    trees = enumerate_rooted_spanning_trees(motif)
    ranked = sorted(range(len(trees)), key=lambda i: (trees[i].looseness, i))
    finalists = [trees[i] for i in ranked[:n_candidates]]
    best = None
    best_w = None
    for tree in finalists:
        w = preprocess(tree, graph, use_c2=use_c2, use_c3=use_c3).total
        if best_w is None or w < best_w:
            best, best_w = tree, w
    return best
