"""Global minimum cut (Stoer-Wagner) and recursive min-cut decomposition."""
from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np


@dataclass(frozen=True)
class MinCut:
    value: int
    side: frozenset
    other: frozenset


def global_min_cut(graph: nx.Graph) -> MinCut:
    """Exact global minimum edge cut by maximum-adjacency ordering.

    Deterministic: ties inside a phase go to the smallest vertex position,
    and a later phase only replaces the incumbent cut on strict improvement.
    ``side`` always holds the smallest vertex. A disconnected graph yields 0.
    """
    nodes = sorted(graph.nodes)
    n = len(nodes)
    if n < 2:
        raise ValueError("global_min_cut needs at least two vertices")
    pos = {v: i for i, v in enumerate(nodes)}
    w = np.zeros((n, n))
    for a, b in graph.edges:
        if a != b:
            w[pos[a], pos[b]] += 1
            w[pos[b], pos[a]] += 1
    groups = [[i] for i in range(n)]
    active = np.ones(n, dtype=bool)
    best, best_group = np.inf, None
    for _ in range(n - 1):
        act = np.flatnonzero(active)
        used = np.zeros(n, dtype=bool)
        used[act[0]] = True
        key = w[act[0]].copy()
        prev = last = act[0]
        cut = 0.0
        for _ in range(len(act) - 1):
            cand = np.where(active & ~used, key, -1.0)
            nxt = int(np.argmax(cand))
            cut = cand[nxt]
            used[nxt] = True
            key += w[nxt]
            prev, last = last, nxt
        if cut < best:
            best, best_group = cut, list(groups[last])
        groups[prev].extend(groups[last])
        w[prev] += w[last]
        w[:, prev] += w[:, last]
        w[prev, prev] = 0.0
        w[last] = 0.0
        w[:, last] = 0.0
        active[last] = False
    side = frozenset(nodes[i] for i in best_group)
    other = frozenset(nodes) - side
    if nodes[0] not in side:
        side, other = other, side
    return MinCut(int(round(best)), side, other)


@dataclass(frozen=True)
class CutNode:
    vertices: frozenset
    cut_size: int | None = None
    min_cut: int | None = None
    children: tuple = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class CutDecomposition:
    threshold: float
    root: CutNode
    removed_edge_total: int

    def _walk(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[CutNode]:
        return [x for x in self._walk() if x.is_leaf]

    def internal_nodes(self) -> list[CutNode]:
        return [x for x in self._walk() if not x.is_leaf]

    def dense_leaves(self) -> list[CutNode]:
        """Non-singleton leaves, i.e. induced subgraphs with min cut >= threshold."""
        return [x for x in self.leaves() if len(x.vertices) > 1]

    def first_dense_leaf(self) -> CutNode | None:
        dense = self.dense_leaves()
        return dense[0] if dense else None


def min_cut_decompose(graph: nx.Graph, t: float) -> CutDecomposition:
    """Split along global min cuts smaller than ``t`` until every piece is
    a singleton or has min cut at least ``t``."""
    if not t > 0:
        raise ValueError(f"threshold must be positive, got {t}")

    def build(vs: frozenset) -> tuple[CutNode, int]:
        if len(vs) == 1:
            return CutNode(vs), 0
        cut = global_min_cut(graph.subgraph(vs))
        if cut.value >= t:
            return CutNode(vs, min_cut=cut.value), 0
        left, r1 = build(cut.side)
        right, r2 = build(cut.other)
        return CutNode(vs, cut_size=cut.value, children=(left, right)), cut.value + r1 + r2

    if graph.number_of_nodes() == 0:
        raise ValueError("empty graph")
    root, removed = build(frozenset(graph.nodes))
    return CutDecomposition(t, root, removed)
