import numpy as np
import pytest

from motifest import (Motif, TemporalGraph, brute_force_partial_matches,
                      build_rooted_tree, enumerate_rooted_spanning_trees,
                      partition_windows, preprocess, preprocess_subgraph)

from conftest import edge_id
from synth import random_graph, random_motif


def test_partition_fixture(g0):
    part = partition_windows(g0, 10)
    assert part.count == 2
    assert part.bounds == ((0, 20), (10, 30))
    # shifted ids: window 0 holds everything, window 1 the last three edges
    assert part.edge_ranges == ((0, 6), (3, 6))


def test_partition_single_window_when_span_within_delta():
    g = TemporalGraph.from_edges([(0, 1, 100), (1, 2, 103)])
    part = partition_windows(g, 10)
    assert part.count == 1
    assert part.bounds == ((0, 20),)


def test_partition_edge_membership_counts(g0):
    part = partition_windows(g0, 10)
    for e in g0.edges():
        members = [i for i, (lo, hi) in enumerate(part.bounds)
                   if lo <= e.t <= hi]
        assert 1 <= len(members) <= 2
    # the boundary edge at t = delta belongs to exactly two windows
    boundary = g0.edge(edge_id(g0, 2, 3, 20))
    assert boundary.t == 10
    assert part.containing_count(boundary.t, boundary.t) == 2


def test_partition_overlap_and_span_cover():
    rng = np.random.default_rng(2)
    for _ in range(20):
        g = random_graph(rng, 10, 60, 500)
        delta = int(rng.integers(5, 120))
        part = partition_windows(g, delta)
        for (lo1, hi1), (lo2, hi2) in zip(part.bounds, part.bounds[1:]):
            assert hi1 - lo2 == delta
        # any span <= delta set of timestamps sits inside some window
        for _ in range(20):
            a = int(rng.integers(0, g.t_max + 1))
            b = min(a + int(rng.integers(0, delta + 1)), g.t_max)
            assert part.containing_count(a, b) >= 1


def test_fixture_weight_table(g0, path_tree):
    table = preprocess(path_tree, g0)
    assert table.total == 7
    assert table.window_totals == (5, 2)
    w0 = table.window_weights(0)
    # center weights by time-sorted edge id over the whole-span window
    assert list(w0[1]) == [0, 0, 1, 1, 2, 1]
    assert list(w0[0]) == [1] * 6  # leaf row
    w1 = table.window_weights(1)
    assert list(w1[1]) == [0, 1, 1]


def test_fixture_single_edge_tree(g0):
    single = Motif(((0, 1),), 10)
    tree = build_rooted_tree(single, (0,), 0)
    table = preprocess(tree, g0)
    # every edge is its own match, counted once per window it lies in
    assert table.window_totals == (6, 3)
    assert table.total == 9


def test_one_edge_graph_single_edge_tree():
    g = TemporalGraph.from_edges([(3, 4, 7)])
    single = Motif(((0, 1),), 10)
    tree = build_rooted_tree(single, (0,), 0)
    assert preprocess(tree, g).total == 1


def test_preprocess_subgraph_fixture(g0, path_tree):
    part = partition_windows(g0, 10)
    total0, weights0 = preprocess_subgraph(path_tree, part.view(g0, 0))
    assert total0 == 5
    assert list(weights0[1]) == [0, 0, 1, 1, 2, 1]
    total1, _ = preprocess_subgraph(path_tree, part.view(g0, 1))
    assert total1 == 2


def test_empty_window_zero_weight(path_tree):
    g = TemporalGraph.from_edges([(0, 1, 0), (1, 2, 95)])
    table = preprocess(path_tree, g, 10)
    assert any(w == 0 for w in table.window_totals)
    assert table.total == sum(table.window_totals)


def test_window_totals_match_brute_force_fixture(g0, path_tree):
    table = preprocess(path_tree, g0)
    part = table.partition
    for i in range(part.count):
        brute = brute_force_partial_matches(path_tree, part.view(g0, i))
        assert table.window_totals[i] == brute


@pytest.mark.parametrize("seed", range(6))
def test_window_totals_match_brute_force_random(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n=8, m=60, t_span=150)
    motif = random_motif(rng, int(rng.integers(2, 5)), int(rng.integers(5, 40)))
    trees = enumerate_rooted_spanning_trees(motif)
    tree = trees[int(rng.integers(0, len(trees)))]
    table = preprocess(tree, g)
    for i in range(table.partition.count):
        view = table.partition.view(g, i)
        assert table.window_totals[i] == brute_force_partial_matches(tree, view)


def test_weights_monotone_in_delta():
    rng = np.random.default_rng(21)
    g = random_graph(rng, n=10, m=120, t_span=300)
    pattern = ((0, 1), (1, 2), (2, 3))
    for delta in (10, 25, 60):
        small = build_rooted_tree(Motif(pattern, delta), (0, 1, 2), 2)
        large = build_rooted_tree(Motif(pattern, 2 * delta), (0, 1, 2), 2)
        view_bounds = (0, g.t_max)
        part_small = preprocess(small, g, delta, use_c3=False)
        part_large = preprocess(large, g, 2 * delta, use_c3=False)
        for s in range(part_small.w.shape[0]):
            assert (part_small.w[s] <= part_large.w[s]).all(), view_bounds


def test_storage_and_scan_bounds():
    rng = np.random.default_rng(22)
    g = random_graph(rng, n=15, m=400, t_span=600)
    motif = Motif(((0, 1), (1, 2), (2, 3), (3, 4)), 80)
    tree = build_rooted_tree(motif, (0, 1, 2, 3), 3)
    table = preprocess(tree, g)
    n_tree = len(tree.edges)
    assert table.entries_total() <= 2 * g.m * n_tree
    # candidate scanning work stays within the documented resource contract
    assert table.scan_ops <= 2 * g.m * n_tree * g.max_degree()


def test_negative_weight_impossible(g0, path_tree):
    table = preprocess(path_tree, g0)
    assert (table.w >= 0).all()
    assert not table.overflowed


def test_overflow_switches_to_float():
    edges = []
    t = 0
    for _ in range(800):
        for v in range(1, 10):
            edges.append((0, v, t)); t += 1
            edges.append((v, 0, t)); t += 1
    g = TemporalGraph.from_edges(edges)
    star = Motif(((1, 0), (2, 0), (3, 0), (4, 0), (5, 0)), 50000)
    tree = build_rooted_tree(star, tuple(range(5)), 4)
    table = preprocess(tree, g)
    assert table.overflowed
    assert table.w.dtype == np.float64
    assert float(table.total) > 2.0 ** 61
