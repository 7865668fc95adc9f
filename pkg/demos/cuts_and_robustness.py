"""Finding well-connected pieces of a dense graph.

We plant three near-cliques, join them with a couple of edges, and let
the recursive min-cut decomposition peel them apart. Then we ask which
edges survive the removal of the most vertices.
"""
import networkx as nx

from netcascade.structure import edge_robustness, min_cut_decompose, robust_edge_exists

g = nx.Graph()
for k in range(3):
    block = nx.complete_graph(range(10 * k, 10 * k + 9))
    g.add_edges_from(block.edges)
g.add_edges_from([(0, 10), (1, 11), (12, 20)])
g.remove_edges_from([(0, 1), (10, 11)])

t = 4
dec = min_cut_decompose(g, t)
print(f"{g.number_of_nodes()} vertices, {g.number_of_edges()} edges, threshold t={t}")
for leaf in dec.dense_leaves():
    print(f"  dense piece: {sorted(leaf.vertices)}")
print(f"  edges removed {dec.removed_edge_total}, internal nodes {len(dec.internal_nodes())}")

for e in [(0, 10), (2, 3), (12, 20)]:
    cert = edge_robustness(g, e)
    print(f"edge {e}: robustness {cert.robustness}, witness {sorted(cert.witness_cut)}")

best = robust_edge_exists(g, 5)
print(f"an edge surviving 5 vertex deletions: {best.edge if best else None}")
