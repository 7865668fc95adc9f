"""Welfare bound formulas and their checkers on small instances."""
from __future__ import annotations

import math
from dataclasses import dataclass

import networkx as nx

from ..game import DEFAULT_MAX_EDGES, StrategyProfile, expected_benefits, induced_graph
from .percolation import expected_largest_component


def welfare_lower_bound(n: int, n_c: int, eps: float) -> float:
    """(n - n_c) n_c^2 / n + eps n_c^3 / (3n).

    The first term is what C's vertices keep when the attack starts outside
    C; the second credits attacks inside C whose damage stays below a
    (1 - eps) fraction of C.
    """
    if not 1 <= n_c <= n:
        raise ValueError(f"need 1 <= n_c <= n, got n={n}, n_c={n_c}")
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    return (n - n_c) * n_c ** 2 / n + eps * n_c ** 3 / (3 * n)


@dataclass(frozen=True)
class WelfareBoundCheck:
    n: int
    component: frozenset
    expected_largest: float
    eps: float
    benefit_sum: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.benefit_sum >= self.bound - 1e-9 * max(1.0, self.bound)


def welfare_bound_check(profile: StrategyProfile | nx.Graph, p: float, component=None,
                        max_edges: int = DEFAULT_MAX_EDGES) -> WelfareBoundCheck:
    """Compare the exact benefit sum of a component with :func:`welfare_lower_bound`.

    ``eps`` is the largest value allowed by the exact E[largest component of
    C[p]], namely 1 - E[largest] / n_c (clipped to [0, 1]).
    """
    g = induced_graph(profile) if isinstance(profile, StrategyProfile) else profile
    n = g.number_of_nodes()
    if component is None:
        component = max(nx.connected_components(g), key=lambda s: (len(s), -min(s)))
    comp = frozenset(component)
    if not comp <= set(g.nodes):
        raise ValueError("component is not a subset of the graph's vertices")
    sub = g.subgraph(comp)
    if not nx.is_connected(sub):
        raise ValueError("component must induce a connected subgraph")
    n_c = len(comp)
    largest = expected_largest_component(sub, p, max_edges)
    eps = min(1.0, max(0.0, 1.0 - largest / n_c))
    benefits = expected_benefits(g, p, max_edges)
    total = math.fsum(float(benefits[v]) for v in comp)
    return WelfareBoundCheck(n, comp, largest, eps, total, welfare_lower_bound(n, n_c, eps))


@dataclass(frozen=True)
class IsolatedVertexBound:
    exact: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.exact >= self.bound


def isolated_vertex_bound(graph: nx.Graph, p: float) -> IsolatedVertexBound:
    """Expected isolated vertices of G[p] and its AM-GM lower bound.

    On a d-regular graph 2|E|/n* = d, so both sides are n* copies of the
    same power; fsum and the product are both correctly rounded, hence equal.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n_star = graph.number_of_nodes()
    if n_star == 0:
        raise ValueError("empty graph")
    degrees = [d for _, d in graph.degree]
    exact = math.fsum((1 - p) ** d for d in degrees)
    twice_m = sum(degrees)
    if twice_m % n_star == 0:
        # integer exponent: keeps the regular case exact
        bound = n_star * (1 - p) ** (twice_m // n_star)
    else:
        bound = n_star * (1 - p) ** (twice_m / n_star)
    return IsolatedVertexBound(exact, bound)


@dataclass(frozen=True)
class DensityReport:
    n: int
    edges: int
    p: float
    nlogn_ratio: float
    linear_ratio: float

    @property
    def exceeds_nlogn(self) -> bool:
        return self.nlogn_ratio > 1.0

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": self.edges, "p": self.p, "nlogn_ratio": self.nlogn_ratio,
                "linear_ratio": self.linear_ratio, "exceeds_nlogn": self.exceeds_nlogn}


def density_report(graph: nx.Graph, p: float) -> DensityReport:
    """|E| p / (n ln n) and |E| p / n; descriptive only."""
    n, m = graph.number_of_nodes(), graph.number_of_edges()
    if n < 2:
        raise ValueError("density report needs at least two vertices")
    return DensityReport(n, m, p, m * p / (n * math.log(n)), m * p / n)
