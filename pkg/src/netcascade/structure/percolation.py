"""Sampled statistics of the percolated graph G[p].

All estimators draw one uniform per edge per sample from a seeded numpy
generator and keep an edge iff its draw is below p. The same seed thus
couples runs at different p: kept edges at p1 are a subset of those at
p2 >= p1, sample by sample.
"""
from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from .. import _kernels
from ..cascade import ProportionEstimate, proportion_interval
from ..game import DEFAULT_MAX_EDGES, EnumerationCapError


def _index(graph: nx.Graph):
    nodes = sorted(graph.nodes)
    pos = {v: i for i, v in enumerate(nodes)}
    pairs = [(pos[a], pos[b]) for a, b in graph.edges if a != b]
    eu = np.array([a for a, _ in pairs], dtype=np.int64)
    ev = np.array([b for _, b in pairs], dtype=np.int64)
    return nodes, pos, eu, ev


def percolation_labels(graph: nx.Graph, p: float, samples: int, seed=0):
    """Yield ``(kept, labels)`` chunks for ``samples`` draws of G[p].

    ``labels[k, i]`` is the smallest vertex position in vertex i's
    component (positions follow sorted node order).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    nodes, _, eu, ev = _index(graph)
    m = len(eu)
    rng = np.random.default_rng(seed)
    rows = max(1, min(1 << 16, (1 << 22) // max(m, 1)))
    done = 0
    while done < samples:
        k = min(rows, samples - done)
        kept = rng.random((k, m)) < p
        yield kept, _kernels.component_labels(len(nodes), eu, ev, kept)
        done += k


def connectivity_probability(graph: nx.Graph, p: float, samples: int = 100_000, seed=0,
                             confidence: float = 0.99) -> ProportionEstimate:
    """Estimate Pr[G[p] is connected] with a Clopper-Pearson interval."""
    hits = 0
    for _, labels in percolation_labels(graph, p, samples, seed):
        hits += int(np.count_nonzero((labels == 0).all(axis=1)))
    return proportion_interval(hits, samples, confidence)


def infection_certainty(graph: nx.Graph, vertices, p: float, samples: int = 100_000, seed=0,
                        confidence: float = 0.99) -> ProportionEstimate:
    """Estimate the probability that an attack entering ``vertices`` kills all of them.

    For any seed s in H the event {H inside the G[p] component of s} is the
    event that H lies in a single component, so the minimum over seeds is
    this one probability.
    """
    h = list(vertices)
    if len(h) < 2:
        raise ValueError("vertex set must contain at least two vertices")
    missing = [x for x in h if x not in graph]
    if missing:
        raise ValueError(f"vertices {missing} are not in the graph")
    nodes, pos, _, _ = _index(graph)
    cols = np.array([pos[x] for x in h])
    hits = 0
    for _, labels in percolation_labels(graph, p, samples, seed):
        sub = labels[:, cols]
        hits += int(np.count_nonzero((sub == sub[:, :1]).all(axis=1)))
    return proportion_interval(hits, samples, confidence)


@dataclass(frozen=True)
class ComponentSizeTail:
    sizes: np.ndarray
    largest: np.ndarray
    degree_tail: np.ndarray
    confidence: float

    @property
    def samples(self) -> int:
        return len(self.sizes)

    def histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.sizes, return_counts=True)
        return dict(zip(vals.tolist(), counts.tolist()))

    def tail(self, s: int) -> ProportionEstimate:
        """Pr[size of a random vertex's component >= s]."""
        return proportion_interval(int(np.count_nonzero(self.sizes >= s)), self.samples, self.confidence)

    def tail_table(self) -> list[tuple[int, ProportionEstimate]]:
        return [(s, self.tail(s)) for s in range(1, int(self.sizes.max()) + 2)]


def component_size_tail(graph: nx.Graph, p: float, samples: int = 10_000, seed=0,
                        confidence: float = 0.99) -> ComponentSizeTail:
    """Sample the G[p] component size of a uniformly random vertex.

    Also records the largest component per sample and, for each d, the
    mean number of vertices with at least d retained edges.

    Each draw takes a Binomial(|E|, p) number of kept edges and then picks
    which ones uniformly, which is the same law as independent coins but
    costs O(p |E|) per sample. These draws are not coupled across p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    nodes, _, eu, ev = _index(graph)
    n, m = len(nodes), len(eu)
    rng = np.random.default_rng(seed)
    sizes = np.empty(samples, dtype=np.int64)
    largest = np.empty(samples, dtype=np.int64)
    max_deg = max((d for _, d in graph.degree), default=0)
    at_least = np.zeros(max_deg + 1)
    one = np.ones((1, 0), dtype=np.bool_)
    for k in range(samples):
        idx = np.sort(rng.choice(m, rng.binomial(m, p), replace=False)) if m else np.empty(0, np.int64)
        a, b = eu[idx], ev[idx]
        labels = _kernels.component_labels(n, a, b, np.ones((1, len(idx)), dtype=np.bool_) if len(idx) else one)
        comp = _kernels.alive_component_sizes(labels, np.ones(labels.shape, dtype=np.bool_))[0]
        sizes[k] = comp[rng.integers(n)]
        largest[k] = comp.max()
        deg = np.bincount(a, minlength=n) + np.bincount(b, minlength=n)
        at_least += np.bincount(deg, minlength=max_deg + 1)[::-1].cumsum()[::-1]
    return ComponentSizeTail(sizes, largest, at_least / samples, confidence)


def expected_largest_component(graph: nx.Graph, p: float, max_edges: int = DEFAULT_MAX_EDGES) -> float:
    """Exact E[size of the largest component of G[p]] by subset enumeration."""
    nodes, _, eu, ev = _index(graph)
    n, m = len(nodes), len(eu)
    if m > max_edges:
        raise EnumerationCapError(f"{m} edges exceed the enumeration cap of {max_edges}")
    if m == 0:
        return 1.0 if n else 0.0
    bits = np.arange(m, dtype=np.int64)
    weights = np.array([p ** k * (1 - p) ** (m - k) for k in range(m + 1)])
    total = 0.0
    for lo in range(0, 1 << m, 1 << 15):
        subsets = np.arange(lo, min(1 << m, lo + (1 << 15)), dtype=np.int64)
        kept = ((subsets[:, None] >> bits) & 1).astype(np.bool_)
        labels = _kernels.component_labels(n, eu, ev, kept)
        sizes = _kernels.alive_component_sizes(labels, np.ones_like(labels, dtype=np.bool_))
        total += float(weights[kept.sum(axis=1)] @ sizes.max(axis=1))
    return total
