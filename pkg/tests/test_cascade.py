import math

import networkx as nx
import numpy as np
import pytest

from netcascade import generators
from netcascade.cascade import (attack_benefit_totals, hoeffding_half_width, monte_carlo_utilities,
                                proportion_interval, sample_percolation, samples_for_accuracy,
                                simulate_attack)
from netcascade.game import GameParams, StrategyProfile, exact_utilities

from oracles import hoeffding


def test_percolation_extremes():
    g = nx.cycle_graph(5)
    full = sample_percolation(g, 1.0, 0)
    assert len(full.kept_edges) == 5 and len(full.components) == 1
    none = sample_percolation(g, 0.0, 0)
    assert none.kept_edges == () and [len(c) for c in none.components] == [1] * 5


def test_percolation_c4_mean_kept_edges():
    rng = np.random.default_rng(11)
    kept = [len(sample_percolation(nx.cycle_graph(4), 0.5, rng).kept_edges) for _ in range(100_000)]
    assert np.mean(kept) == pytest.approx(2.0, abs=0.02)


def test_percolation_coupling_across_p():
    g = nx.erdos_renyi_graph(12, 0.4, seed=3)
    for seed in range(50):
        lo = set(sample_percolation(g, 0.3, seed).kept_edges)
        hi = set(sample_percolation(g, 0.6, seed).kept_edges)
        assert lo <= hi


def test_attack_star_leaf_edge_not_kept():
    star = generators.hub_spoke(5)
    out = simulate_attack(star, 0.0, 0, seed_vertex=3)
    assert out.dead == frozenset({3})
    assert [len(c) for c in out.survivor_components] == [4]
    assert out.benefit(3) == 0 and out.benefit(1) == 4


def test_attack_p_one_kills_component():
    prof = generators.two_hub_spoke(8)
    for seed in range(10):
        out = simulate_attack(prof, 1.0, seed)
        assert out.seed_vertex in out.dead
        assert out.dead == frozenset(range(4)) or out.dead == frozenset(range(4, 8))


def test_attack_isolated_seed():
    out = simulate_attack(StrategyProfile(4, [{1}, set(), set(), set()]), 0.9, 0, seed_vertex=3)
    assert out.dead == frozenset({3})
    assert sorted(map(sorted, out.survivor_components)) == [[0, 1], [2]]


def test_attack_outcome_partitions_vertices():
    g = generators.linear_paths(11)
    rng = np.random.default_rng(2)
    for _ in range(50):
        out = simulate_attack(g, 0.5, rng)
        parts = [out.dead, *out.survivor_components]
        assert sum(map(len, parts)) == 11 and frozenset().union(*parts) == frozenset(range(11))


def test_hoeffding_and_sample_count():
    assert hoeffding_half_width(8, 1000, 0.99) == pytest.approx(hoeffding(8, 1000, 0.99), rel=1e-14)
    s = samples_for_accuracy(8, 0.05, 0.01)
    assert s == math.ceil(64 * math.log(200) / (2 * 0.05 ** 2))
    assert hoeffding_half_width(8, s, 0.99) <= 0.05
    with pytest.raises(ValueError):
        samples_for_accuracy(8, 0.0, 0.01)


def test_zero_samples_rejected():
    with pytest.raises(ValueError):
        monte_carlo_utilities(StrategyProfile(2, [{1}, set()]), GameParams(0.25, 0.5), samples=0)


def test_two_vertex_mc_within_ci():
    est = monte_carlo_utilities(StrategyProfile(2, [{1}, set()]), GameParams(0.25, 0.5),
                                samples=1_000_000, rng_seed=5)
    assert est[0].contains(0.0) and est[1].contains(0.25)
    assert est[0].mean == pytest.approx(0.0, abs=0.005)


def test_star8_mc_welfare_within_ci():
    prof, params = generators.hub_spoke(8), GameParams(0.5, 0.6)
    exact = exact_utilities(prof, params).welfare
    est = monte_carlo_utilities(prof, params, samples=400_000, rng_seed=1)
    assert est.welfare.contains(exact)
    assert est.welfare.mean == pytest.approx(math.fsum(e.mean for e in est.players), abs=1e-12)


def test_empty_graph_mc_welfare_is_constant():
    # every sample kills exactly the seed, so the per-sample total is n - 1;
    # a single player's benefit still depends on whether it was the seed
    est = monte_carlo_utilities(StrategyProfile(7), GameParams(1.0, 0.5), samples=5000, rng_seed=3)
    assert est.welfare.mean == pytest.approx(6.0, abs=1e-12)
    assert all(e.contains(6 / 7) for e in est.players)
    assert est.benefit_std == pytest.approx(np.sqrt(est.means * (1 - est.means)), rel=1e-9)


def test_mc_determinism_and_worker_invariance():
    prof, params = generators.cycle(8), GameParams(0.3, 0.4)
    a = monte_carlo_utilities(prof, params, samples=200_000, rng_seed=9)
    b = monte_carlo_utilities(prof, params, samples=200_000, rng_seed=9, workers=3)
    c = monte_carlo_utilities(prof, params, samples=200_000, rng_seed=10)
    assert np.array_equal(a.means, b.means)
    assert not np.array_equal(a.means, c.means)


def test_benefit_totals_prefix_consistency():
    # sample s is the same draw whatever the total count
    edges = generators.cycle(6).edges()
    a, _ = attack_benefit_totals(6, edges, 0.5, 70_000, 4)
    b, _ = attack_benefit_totals(6, edges, 0.5, 140_000, 4)
    c, _ = attack_benefit_totals(6, edges, 0.5, 70_000, 4)
    assert np.array_equal(a, c)
    assert np.all(b >= a)


def test_estimator_consistency_coarse():
    prof, params = generators.tree(6, 2), GameParams(0.2, 0.5)
    exact = exact_utilities(prof, params).utilities
    hits = 0
    for rep in range(100):
        est = monte_carlo_utilities(prof, params, samples=2000, confidence=0.9, rng_seed=rep)
        hits += sum(est[i].contains(exact[i]) for i in range(prof.n))
    assert hits / 600 >= 0.9


def test_proportion_interval():
    est = proportion_interval(50, 100, 0.95)
    assert est.lower < 0.5 < est.upper
    assert proportion_interval(0, 10).lower == 0.0 and proportion_interval(10, 10).upper == 1.0
