import math
from fractions import Fraction

import numpy as np
import pytest

from motifest import (EstimateConfig, Motif, advise_samples,
                      enumerate_rooted_spanning_trees, estimate, exact_count,
                      load_graph, preprocess, validate_and_derive)
from motifest.estimate import _allocate
from motifest.sampling import _run_sample_batch
from test_counting import make_match

from synth import cycle_motif, random_graph


def test_advise_samples_formula():
    assert advise_samples(1, 0.1, 0.05, 10, 1) == 11067
    gamma = 2 / math.exp(2)
    assert advise_samples(1, 1 - 1e-12, gamma, 1, 1) == 6
    # linearity in the weight for an integer-exact instance
    base = advise_samples(1, 0.5, 2 / math.exp(2), 4, 1)
    assert advise_samples(1, 0.5, 2 / math.exp(2), 8, 1) == 2 * base == 192


def test_advise_samples_validates():
    with pytest.raises(ValueError):
        advise_samples(1, 1.5, 0.1, 1, 1)
    with pytest.raises(ValueError):
        advise_samples(0, 0.5, 0.1, 1, 1)


def test_config_validation():
    with pytest.raises(ValueError):
        EstimateConfig(samples=0)
    with pytest.raises(ValueError):
        EstimateConfig(samples=1, workers=0)
    with pytest.raises(ValueError):
        EstimateConfig(samples=1, runs=0)


def test_two_path_estimate_converges(g0, two_path_motif, path_tree):
    cfg = EstimateConfig(samples=40_000, seed=1, tree=path_tree)
    rep = estimate(two_path_motif, g0, cfg)
    assert rep.total_weight == 7
    assert abs(rep.estimate - 5.0) < 0.25
    assert rep.valid_rate > 0.6
    assert rep.tree == path_tree.describe()


def test_rescaling_identity_is_exact(g0, two_path_motif, path_tree):
    cfg = EstimateConfig(samples=3_333, seed=9, tree=path_tree)
    rep = estimate(two_path_motif, g0, cfg)
    assert rep.raw_count.denominator in (1, 2, 3, 6)
    assert rep.estimate == float(rep.raw_count / cfg.samples * rep.total_weight)


def test_triangle_unbiased_over_runs(g0_first_four, triangle_motif):
    cfg = EstimateConfig(samples=400, seed=5, runs=120)
    rep = estimate(triangle_motif, g0_first_four, cfg)
    exact = exact_count(triangle_motif, g0_first_four)
    assert exact == 2
    per_run = np.asarray(rep.per_run)
    se = per_run.std(ddof=1) / math.sqrt(len(per_run))
    assert abs(per_run.mean() - exact) < 4 * max(se, 1e-12) + 1e-9
    assert len(rep.per_run) == 120
    assert rep.spread_mean is not None and rep.spread_std is not None


def test_zero_weight_short_circuits(two_path_motif):
    # no consecutive pair fits inside delta, so the tree has no matches
    g = load_graph(b"1 2 0\n2 3 1000\n")
    cfg = EstimateConfig(samples=10, seed=0)
    rep = estimate(two_path_motif, g, cfg)
    assert rep.no_tree_matches
    assert rep.estimate == 0.0
    assert exact_count(two_path_motif, g) == 0


def test_empty_graph_estimate(two_path_motif):
    rep = estimate(two_path_motif, load_graph(b""), EstimateConfig(samples=5))
    assert rep.estimate == 0.0 and rep.no_tree_matches


def test_motif_absent_estimates_zero_for_every_seed():
    # tree matches exist but no sample can ever extend to the full pattern
    g = load_graph(b"1 2 0\n2 3 1\n2 3 2\n1 2 3\n2 4 4\n")
    tri = Motif(((0, 1), (1, 2), (2, 0)), 100)
    assert exact_count(tri, g) == 0
    for seed in range(4):
        rep = estimate(tri, g, EstimateConfig(samples=300, seed=seed))
        assert rep.estimate == 0.0


def test_report_is_deterministic(g0, two_path_motif):
    cfg = EstimateConfig(samples=5_000, seed=17)
    a = estimate(two_path_motif, g0, cfg)
    b = estimate(two_path_motif, g0, cfg)
    assert a.estimate == b.estimate
    assert a.raw_count == b.raw_count
    assert a.valid_rate == b.valid_rate
    assert a.invalid_rates == b.invalid_rates


def test_worker_count_does_not_change_results(g0, two_path_motif):
    one = estimate(two_path_motif, g0,
                   EstimateConfig(samples=20_000, seed=3, workers=1))
    two = estimate(two_path_motif, g0,
                   EstimateConfig(samples=20_000, seed=3, workers=2))
    assert one.estimate == two.estimate
    assert one.raw_count == two.raw_count


def test_tree_override_is_used(g0, two_path_motif):
    trees = enumerate_rooted_spanning_trees(two_path_motif)
    for tree in trees:
        rep = estimate(two_path_motif, g0,
                       EstimateConfig(samples=100, seed=0, tree=tree))
        assert rep.tree == tree.describe()


def test_kernel_agrees_with_python_pipeline(g0, two_path_motif, path_tree):
    # replay every draw of a run through the plain-python counter and compare
    k, seed = 400, 23
    table = preprocess(path_tree, g0)
    rep = estimate(two_path_motif, g0,
                   EstimateConfig(samples=k, seed=seed, tree=path_tree))
    alloc_rng = np.random.Generator(np.random.PCG64(seed ^ 0x5EED5EED))
    allocation = _allocate(table.window_totals, table.total, k, alloc_rng)
    wins, picks, faults = _run_sample_batch(table, k, seed=seed,
                                            allocation=allocation)
    assert faults == 0
    acc = Fraction(0)
    for j in range(k):
        match = make_match(g0, path_tree, picks[j], window_index=int(wins[j]))
        acc += validate_and_derive(two_path_motif, path_tree, match,
                                   table.partition, g0)
    assert acc == rep.raw_count


def test_error_shrinks_with_sample_budget():
    rng = np.random.default_rng(71)
    g = random_graph(rng, n=25, m=1500, t_span=2500)
    motif = cycle_motif(3, 250)
    exact = exact_count(motif, g)
    assert exact > 0
    tree = min(enumerate_rooted_spanning_trees(motif),
               key=lambda t: t.looseness)
    w = preprocess(tree, g).total
    medians = []
    for mult in (1, 4, 16):
        errs = []
        for run in range(15):
            cfg = EstimateConfig(samples=mult * w, seed=1000 + run, tree=tree)
            rep = estimate(motif, g, cfg)
            errs.append(abs(rep.estimate - exact) / exact)
        medians.append(float(np.median(errs)))
    assert medians[2] < medians[0]
    assert medians[1] <= medians[0] * 1.25  # allow mild noise mid-scale
