"""How many vertex deletions it takes to make an edge the only path between its ends."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import networkx as nx


@dataclass(frozen=True)
class RobustnessCertificate:
    edge: tuple
    robustness: int
    witness_cut: frozenset


def edge_robustness(graph: nx.Graph, edge) -> RobustnessCertificate:
    """Minimum u-v vertex cut in G minus the edge (u, v).

    By Menger this equals the number of internally vertex-disjoint u-v
    paths avoiding the direct edge; found by unit-vertex-capacity max flow
    on the split graph (x_in -> x_out carries capacity 1).
    """
    u, v = edge
    if not graph.has_edge(u, v):
        raise ValueError(f"edge {edge!r} is not in the graph")
    nodes = sorted(graph.nodes)
    idx = {x: i for i, x in enumerate(nodes)}
    big = len(nodes) + 1
    cap: dict[int, dict[int, int]] = {k: {} for k in range(2 * len(nodes))}

    def arc(a, b, c):
        cap[a][b] = cap[a].get(b, 0) + c
        cap[b].setdefault(a, 0)

    for x in nodes:
        i = idx[x]
        arc(2 * i, 2 * i + 1, big if x in (u, v) else 1)
    for a, b in graph.edges:
        if {a, b} == {u, v} or a == b:
            continue
        arc(2 * idx[a] + 1, 2 * idx[b], big)
        arc(2 * idx[b] + 1, 2 * idx[a], big)
    source, sink = 2 * idx[u] + 1, 2 * idx[v]

    flow = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            a = queue.popleft()
            for b, c in cap[a].items():
                if c > 0 and b not in parent:
                    parent[b] = a
                    queue.append(b)
        if sink not in parent:
            break
        b = sink
        while parent[b] is not None:
            a = parent[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
        flow += 1
    reach = set(parent)
    witness = frozenset(x for x in nodes if 2 * idx[x] in reach and 2 * idx[x] + 1 not in reach)
    return RobustnessCertificate((u, v), flow, witness)


def robust_edge_exists(graph: nx.Graph, gamma: int) -> RobustnessCertificate | None:
    """First edge (in sorted order) whose robustness is at least ``gamma + 1``."""
    need = gamma + 1
    deg = dict(graph.degree)
    for a, b in sorted(tuple(sorted(e)) for e in graph.edges):
        # each disjoint path leaves a through a distinct neighbour other than b
        if min(deg[a], deg[b]) - 1 < need:
            continue
        cert = edge_robustness(graph, (a, b))
        if cert.robustness >= need:
            return cert
    return None
