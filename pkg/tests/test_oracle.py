import numpy as np
import pytest

from motifest import (Motif, TemporalGraph, brute_force_count,
                      brute_force_partial_matches, build_rooted_tree,
                      exact_count, load_graph, partition_windows)

from synth import random_graph, random_motif


def test_two_path_fixture(g0, two_path_motif):
    assert exact_count(two_path_motif, g0) == 5
    assert brute_force_count(two_path_motif, g0) == 5


def test_triangle_fixture(g0_first_four, triangle_motif):
    assert exact_count(triangle_motif, g0_first_four) == 2
    assert brute_force_count(triangle_motif, g0_first_four) == 2


def test_single_edge_motif_counts_edges(g0):
    single = Motif(((0, 1),), 7)
    assert exact_count(single, g0) == g0.m
    assert brute_force_count(single, g0) == g0.m


def test_empty_graph():
    g = load_graph(b"")
    assert exact_count(Motif(((0, 1),), 5), g) == 0
    assert brute_force_count(Motif(((0, 1),), 5), g) == 0


def test_parallel_edge_motif():
    # two pattern edges over the same ordered pair: ordered pairs within delta
    g = TemporalGraph.from_edges([(1, 2, 0), (1, 2, 4), (1, 2, 9), (1, 2, 30)])
    m = Motif(((0, 1), (0, 1)), 10)
    assert exact_count(m, g) == 3  # (0,4) (0,9) (4,9); 30 pairs with nothing
    assert brute_force_count(m, g) == 3


def test_strict_order_excludes_timestamp_ties():
    g = TemporalGraph.from_edges([(1, 2, 5), (2, 3, 5), (2, 3, 6)])
    m = Motif(((0, 1), (1, 2)), 10)
    assert exact_count(m, g) == 1
    assert brute_force_count(m, g) == 1


@pytest.mark.parametrize("seed", range(12))
def test_exact_equals_brute_force_random(seed):
    rng = np.random.default_rng(900 + seed)
    g = random_graph(rng, n=int(rng.integers(4, 10)),
                     m=int(rng.integers(15, 70)), t_span=120)
    motif = random_motif(rng, int(rng.integers(2, 6)), int(rng.integers(5, 35)))
    assert exact_count(motif, g) == brute_force_count(motif, g)


def test_threads_do_not_change_the_count():
    rng = np.random.default_rng(33)
    g = random_graph(rng, n=12, m=300, t_span=400)
    motif = random_motif(rng, 4, 50)
    assert exact_count(motif, g, threads=1) == exact_count(motif, g, threads=2)


def test_tree_relaxation_never_reduces_matches():
    # dropping the non-tree pattern edges can only add matches
    rng = np.random.default_rng(44)
    for _ in range(10):
        g = random_graph(rng, n=7, m=60, t_span=100)
        motif = random_motif(rng, int(rng.integers(3, 6)),
                             int(rng.integers(10, 40)))
        from motifest import enumerate_rooted_spanning_trees
        tree = enumerate_rooted_spanning_trees(motif)[0]
        kept = sorted(tree.edges)
        sub = Motif(tuple(motif.edges[i] for i in kept), motif.delta)
        assert exact_count(sub, g) >= exact_count(motif, g)


def test_translation_invariance():
    rng = np.random.default_rng(55)
    base = [(int(u), int(v), int(t)) for u, v, t in
            zip(rng.integers(0, 6, 40), rng.integers(0, 6, 40),
                rng.integers(0, 90, 40)) if u != v]
    motif = random_motif(rng, 3, 20)
    g1 = TemporalGraph.from_edges(base)
    g2 = TemporalGraph.from_edges([(u, v, t + 1234) for u, v, t in base])
    assert exact_count(motif, g1) == exact_count(motif, g2)


def test_brute_force_guards():
    rng = np.random.default_rng(66)
    g = random_graph(rng, n=30, m=400, t_span=100)
    with pytest.raises(ValueError, match="refuses"):
        brute_force_count(Motif(((0, 1), (1, 2)), 10), g)
    g_small = random_graph(rng, n=5, m=20, t_span=50)
    with pytest.raises(ValueError, match="refuses"):
        brute_force_count(random_motif(rng, 7, 10), g_small)


def test_partial_match_oracle_fixture(g0, path_tree):
    part = partition_windows(g0, 10)
    # whole-span window: five relaxed matches; upper window: two
    assert brute_force_partial_matches(path_tree, part.view(g0, 0)) == 5
    assert brute_force_partial_matches(path_tree, part.view(g0, 1)) == 2


def test_partial_match_oracle_single_edge_tree(g0):
    single = Motif(((0, 1),), 10)
    tree = build_rooted_tree(single, (0,), 0)
    part = partition_windows(g0, 10)
    for i in range(part.count):
        view = part.view(g0, i)
        assert brute_force_partial_matches(tree, view) == view.size
