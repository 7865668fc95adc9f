import itertools
import math

import networkx as nx
import numpy as np
import pytest

from netcascade import generators
from netcascade.game import StrategyProfile
from netcascade.structure import (component_size_tail, connectivity_probability, density_report,
                                  edge_robustness, expected_largest_component, global_min_cut,
                                  infection_certainty, isolated_vertex_bound, min_cut_decompose,
                                  percolation_labels, robust_edge_exists, welfare_bound_check,
                                  welfare_lower_bound)

from oracles import brute_largest_component, brute_min_cut, brute_robustness, random_connected_graph


# --- min cut ---------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 6, 11])
def test_min_cut_cycle_and_complete(n):
    assert global_min_cut(nx.cycle_graph(n)).value == 2
    assert global_min_cut(nx.complete_graph(n)).value == n - 1


def test_min_cut_two_cliques_bridge():
    g = nx.disjoint_union(nx.complete_graph(4), nx.complete_graph(4))
    g.add_edge(0, 4)
    cut = global_min_cut(g)
    assert cut.value == brute_min_cut(g) == 1
    assert cut.side == frozenset(range(4))


def test_min_cut_disconnected_and_tiny():
    assert global_min_cut(nx.empty_graph(3)).value == 0
    with pytest.raises(ValueError):
        global_min_cut(nx.empty_graph(1))


@pytest.mark.parametrize("seed", range(25))
def test_min_cut_matches_bruteforce(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 10))
    g = nx.gnp_random_graph(n, float(rng.uniform(0.2, 0.9)), seed=seed)
    cut = global_min_cut(g)
    assert cut.value == brute_min_cut(g)
    assert 0 in cut.side and cut.side | cut.other == frozenset(g.nodes) and not cut.side & cut.other
    assert sum(1 for a, b in g.edges if (a in cut.side) != (b in cut.side)) == cut.value


def test_min_cut_deterministic():
    g = nx.random_regular_graph(4, 12, seed=1)
    assert global_min_cut(g) == global_min_cut(g.copy())


def test_decompose_complete_single_leaf():
    dec = min_cut_decompose(nx.complete_graph(10), 5)
    assert [len(x.vertices) for x in dec.leaves()] == [10]
    assert dec.removed_edge_total == 0


def test_decompose_cycle_all_singletons():
    dec = min_cut_decompose(nx.cycle_graph(10), 3)
    assert all(len(x.vertices) == 1 for x in dec.leaves())
    assert dec.first_dense_leaf() is None
    assert len(dec.internal_nodes()) == 9
    assert all(x.cut_size < 3 for x in dec.internal_nodes())


def test_decompose_two_cliques():
    g = nx.disjoint_union(nx.complete_graph(6), nx.complete_graph(6))
    g.add_edges_from([(0, 6), (1, 7)])
    dec = min_cut_decompose(g, 4)
    assert sorted(sorted(x.vertices) for x in dec.dense_leaves()) == [list(range(6)), list(range(6, 12))]
    assert dec.removed_edge_total == 2


@pytest.mark.parametrize("seed", range(10))
def test_decompose_invariants_on_dense_graphs(seed):
    rng = np.random.default_rng(seed)
    t = int(rng.choice([2, 3]))
    n = int(rng.integers(10, 25))
    g = nx.gnm_random_graph(n, t * n + int(rng.integers(0, n)), seed=seed)
    dec = min_cut_decompose(g, t)
    assert dec.dense_leaves()
    for leaf in dec.dense_leaves():
        assert nx.stoer_wagner(g.subgraph(leaf.vertices))[0] >= t
    internal = len(dec.internal_nodes())
    assert dec.removed_edge_total <= t * internal
    assert internal <= n - 1


# --- robustness ------------------------------------------------------------

def test_robustness_examples():
    assert edge_robustness(nx.complete_graph(5), (0, 1)).robustness == 3
    assert edge_robustness(nx.cycle_graph(9), (3, 4)).robustness == 1
    assert edge_robustness(nx.balanced_tree(2, 3), (0, 1)).robustness == 0
    with pytest.raises(ValueError):
        edge_robustness(nx.path_graph(3), (0, 2))


@pytest.mark.parametrize("seed", range(20))
def test_robustness_witness_and_bruteforce(seed):
    rng = np.random.default_rng(seed)
    g = nx.gnp_random_graph(int(rng.integers(3, 9)), 0.6, seed=seed)
    for u, v in g.edges:
        cert = edge_robustness(g, (u, v))
        assert cert.robustness == brute_robustness(g, u, v) == len(cert.witness_cut)
        h = g.copy()
        h.remove_edge(u, v)
        h.remove_nodes_from(cert.witness_cut)
        assert not nx.has_path(h, u, v)


def test_robust_edge_exists_examples():
    k10 = robust_edge_exists(nx.complete_graph(10), 2)
    assert k10 is not None and k10.robustness == 8
    assert robust_edge_exists(nx.cycle_graph(20), 1) is None
    assert robust_edge_exists(nx.balanced_tree(3, 2), 0) is None
    assert robust_edge_exists(nx.cycle_graph(5), 0) is not None


# --- percolation ------------------------------------------------------------

def test_connectivity_triangle():
    est = connectivity_probability(nx.complete_graph(3), 0.5, 100_000, seed=1)
    assert est.contains(0.5)


def test_connectivity_tree_and_extremes():
    tree = nx.balanced_tree(2, 2)
    est = connectivity_probability(tree, 0.6, 100_000, seed=2)
    assert est.contains(0.6 ** 6)
    assert connectivity_probability(tree, 1.0, 100).estimate == 1.0
    assert connectivity_probability(tree, 0.0, 100).estimate == 0.0


def test_percolation_labels_coupled():
    g = nx.gnp_random_graph(15, 0.4, seed=0)
    (lo, _), = percolation_labels(g, 0.3, 500, seed=4)
    (hi, _), = percolation_labels(g, 0.7, 500, seed=4)
    assert np.all(lo <= hi)


def test_infection_single_edge():
    assert infection_certainty(nx.path_graph(2), [0, 1], 0.5, 100_000, seed=1).contains(0.5)


def test_infection_clique():
    assert infection_certainty(nx.complete_graph(20), range(20), 0.9, 20_000, seed=1).estimate >= 0.99


def test_infection_leaf_argument():
    tree = nx.balanced_tree(2, 3)
    est = infection_certainty(tree, tree.nodes, 0.8, 50_000, seed=3)
    assert est.estimate <= 0.8 + (est.upper - est.estimate)


def test_infection_monotone_in_p_on_clique():
    g = nx.complete_graph(8)
    vals = [infection_certainty(g, g.nodes, p, 20_000, seed=5).successes for p in np.linspace(0.05, 0.95, 10)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_infection_validation():
    with pytest.raises(ValueError):
        infection_certainty(nx.path_graph(3), [0], 0.5)
    with pytest.raises(ValueError):
        infection_certainty(nx.path_graph(3), [0, 7], 0.5)


def test_component_tail_examples():
    assert component_size_tail(nx.empty_graph(6), 0.7, 200).histogram() == {1: 200}
    est = component_size_tail(nx.path_graph(2), 0.5, 50_000, seed=1).tail(2)
    assert est.contains(0.5)


def test_component_tail_subcritical_complete_graph():
    n = 2000
    res = component_size_tail(nx.complete_graph(n), 0.5 / n, 300, seed=1)
    assert res.largest.max() <= 10 * math.log(n)
    tails = [res.tail(s).estimate for s in (1, 2, 4, 8)]
    assert tails[0] == 1.0 and all(a > b for a, b in zip(tails, tails[1:]))
    assert res.degree_tail[0] == n
    assert res.degree_tail[1] == pytest.approx(n * (1 - (1 - 0.5 / n) ** (n - 1)), rel=0.05)


def test_expected_largest_component_matches_bruteforce():
    g = nx.gnm_random_graph(6, 8, seed=2)
    for p in (0.0, 0.3, 0.8, 1.0):
        assert expected_largest_component(g, p) == pytest.approx(brute_largest_component(g, p), abs=1e-12)


# --- bounds -----------------------------------------------------------------

def test_welfare_lower_bound_values():
    assert welfare_lower_bound(30, 30, 0.3) == pytest.approx(90.0)
    assert welfare_lower_bound(50, 20, 0.0) == pytest.approx(30 * 400 / 50)
    with pytest.raises(ValueError):
        welfare_lower_bound(5, 6, 0.1)
    with pytest.raises(ValueError):
        welfare_lower_bound(5, 5, 1.5)


def test_welfare_bound_cycle8():
    chk = welfare_bound_check(generators.cycle(8), 0.8)
    assert chk.expected_largest == pytest.approx(brute_largest_component(nx.cycle_graph(8), 0.8), abs=1e-12)
    assert chk.eps == pytest.approx(1 - chk.expected_largest / 8)
    assert chk.holds


def test_welfare_bound_with_outside_vertices():
    prof = StrategyProfile(9, [{1}, {2}, {3}, {0}, set(), {6}, set(), set(), set()])
    chk = welfare_bound_check(prof, 0.4, component=range(4))
    assert chk.n == 9 and len(chk.component) == 4 and chk.holds


def test_isolated_vertex_examples():
    star = isolated_vertex_bound(nx.star_graph(4), 0.5)
    assert star.exact == 2.0625
    assert star.bound == pytest.approx(5 * 0.5 ** 1.6)
    assert star.holds
    assert isolated_vertex_bound(nx.petersen_graph(), 0.3).exact == isolated_vertex_bound(nx.petersen_graph(), 0.3).bound
    assert isolated_vertex_bound(nx.path_graph(7), 0.0).exact == 7


@pytest.mark.parametrize("seed", range(20))
def test_isolated_vertex_inequality_random(seed):
    rng = np.random.default_rng(seed)
    g = nx.gnp_random_graph(int(rng.integers(2, 30)), float(rng.uniform(0.05, 0.9)), seed=seed)
    for p in (0.1, 0.5, 0.9):
        r = isolated_vertex_bound(g, p)
        assert r.exact >= r.bound


def test_density_report_examples():
    assert density_report(nx.cycle_graph(12), 0.3).linear_ratio == pytest.approx(0.3)
    small = density_report(nx.complete_graph(10), 0.5)
    big = density_report(nx.complete_graph(80), 0.5)
    assert big.exceeds_nlogn and big.nlogn_ratio > small.nlogn_ratio
    assert density_report(nx.star_graph(20), 1.0).linear_ratio < 1
