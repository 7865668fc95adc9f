"""Slow, independent reference implementations used by the test suite.

Nothing here imports the package's enumeration or flow code; everything is
rebuilt from networkx primitives and itertools so agreement is meaningful.
"""
import itertools
import math

import networkx as nx
import numpy as np


def brute_benefits(n, edges, p):
    """E[CC_i] per player by looping over every kept-edge subset and every seed."""
    edges = sorted(tuple(sorted(e)) for e in edges)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    out = [0.0] * n
    for mask in itertools.product((0, 1), repeat=len(edges)):
        k = sum(mask)
        w = p ** k * (1 - p) ** (len(edges) - k)
        if w == 0:
            continue
        kept = nx.Graph()
        kept.add_nodes_from(range(n))
        kept.add_edges_from(e for e, b in zip(edges, mask) if b)
        for v in range(n):
            dead = nx.node_connected_component(kept, v)
            rest = g.subgraph(set(range(n)) - dead)
            for comp in nx.connected_components(rest):
                for i in comp:
                    out[i] += w * len(comp) / n
    return out


def brute_utilities(n, purchases, c, p):
    edges = {tuple(sorted((i, j))) for i in range(n) for j in purchases[i]}
    b = brute_benefits(n, edges, p)
    return [b[i] - len(purchases[i]) * c for i in range(n)]


def brute_min_cut(g):
    """Minimum edge cut over every bipartition (vertex 0's side fixed)."""
    nodes = sorted(g.nodes)
    first, rest = nodes[0], nodes[1:]
    best = math.inf
    for r in range(len(rest)):
        for combo in itertools.combinations(rest, r):
            side = {first, *combo}
            best = min(best, sum(1 for a, b in g.edges if (a in side) != (b in side)))
    return best


def brute_robustness(g, u, v):
    """Smallest vertex set whose removal leaves the direct edge as the only u-v path."""
    h = g.copy()
    h.remove_edge(u, v)
    others = [x for x in sorted(h.nodes) if x not in (u, v)]
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            k = h.subgraph(set(h.nodes) - set(combo))
            if not nx.has_path(k, u, v):
                return r
    raise AssertionError("unreachable: removing every other vertex always separates u and v")


def brute_largest_component(g, p):
    edges = list(g.edges)
    total = 0.0
    for mask in itertools.product((0, 1), repeat=len(edges)):
        k = sum(mask)
        kept = nx.Graph()
        kept.add_nodes_from(g.nodes)
        kept.add_edges_from(e for e, b in zip(edges, mask) if b)
        total += p ** k * (1 - p) ** (len(edges) - k) * max(len(c) for c in nx.connected_components(kept))
    return total


def random_profile(rng, n_max=8, e_max=14, n_min=2):
    """A random strategy profile as ``(n, purchases)`` with at most ``e_max`` distinct edges."""
    n = int(rng.integers(n_min, n_max + 1))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = int(rng.integers(0, min(e_max, len(pairs)) + 1))
    chosen = rng.choice(len(pairs), size=m, replace=False) if m else []
    purchases = [set() for _ in range(n)]
    for k in chosen:
        i, j = pairs[int(k)]
        if rng.random() < 0.5:
            i, j = j, i
        purchases[i].add(j)
    return n, purchases


def random_connected_graph(rng, n, m):
    while True:
        g = nx.gnm_random_graph(n, m, seed=int(rng.integers(1 << 31)))
        if nx.is_connected(g):
            return g


def hoeffding(n, samples, confidence):
    return n * np.sqrt(np.log(2 / (1 - confidence)) / (2 * samples))
