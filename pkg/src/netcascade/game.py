"""Strategy profiles, the induced game graph and exact utility computation.

Utilities follow the reachability-with-attack model: an attack starts at a
uniformly random vertex, kills that vertex's component in the percolated
graph G[p], and each surviving player gains the size of her component in
G restricted to the survivors. Edge purchases cost ``c`` each.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from . import _kernels

DEFAULT_MAX_EDGES = 20
_CHUNK = 1 << 15


class ProfileError(ValueError):
    """A strategy profile, parameter set or graph file is malformed."""


class EnumerationCapError(ValueError):
    """Exact enumeration refused because the instance is too large."""


@dataclass(frozen=True)
class GameParams:
    c: float
    p: float

    def __post_init__(self):
        if not (isinstance(self.c, (int, float)) and math.isfinite(self.c) and self.c > 0):
            raise ProfileError(f"params.c must be a positive real, got {self.c!r}")
        if not (isinstance(self.p, (int, float)) and 0.0 <= self.p <= 1.0):
            raise ProfileError(f"params.p must lie in [0, 1], got {self.p!r}")


@dataclass(frozen=True)
class StrategyProfile:
    """Per-player purchase sets; ``purchases[i]`` holds the vertices i bought edges to."""

    n: int
    purchases: tuple[frozenset[int], ...]

    def __init__(self, n: int, purchases: Sequence[Iterable[int]] | Mapping[int, Iterable[int]] | None = None):
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
            raise ProfileError(f"n must be an integer >= 1, got {n!r}")
        n = int(n)
        if purchases is None:
            sets = [frozenset() for _ in range(n)]
        elif isinstance(purchases, Mapping):
            bad = [k for k in purchases if not (isinstance(k, (int, np.integer)) and 0 <= k < n)]
            if bad:
                raise ProfileError(f"purchases has out-of-range player keys {bad}")
            sets = [frozenset(int(x) for x in purchases.get(i, ())) for i in range(n)]
        else:
            purchases = list(purchases)
            if len(purchases) != n:
                raise ProfileError(f"purchases must have n={n} entries, got {len(purchases)}")
            sets = [frozenset(int(x) for x in s) for s in purchases]
        for i, s in enumerate(sets):
            if i in s:
                raise ProfileError(f"purchases[{i}] contains a self-loop")
            out = sorted(j for j in s if not 0 <= j < n)
            if out:
                raise ProfileError(f"purchases[{i}] has out-of-range endpoints {out}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "purchases", tuple(sets))

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edge list (u < v), sorted."""
        es = {(min(i, j), max(i, j)) for i, s in enumerate(self.purchases) for j in s}
        return sorted(es)

    def buyers(self) -> dict[tuple[int, int], tuple[int, ...]]:
        out: dict[tuple[int, int], list[int]] = {}
        for i, s in enumerate(self.purchases):
            for j in s:
                out.setdefault((min(i, j), max(i, j)), []).append(i)
        return {e: tuple(sorted(b)) for e, b in sorted(out.items())}

    def costs(self, c: float) -> np.ndarray:
        return np.array([len(s) * c for s in self.purchases], dtype=float)

    def with_strategy(self, player: int, strategy: Iterable[int]) -> StrategyProfile:
        sets = list(self.purchases)
        sets[player] = frozenset(strategy)
        return StrategyProfile(self.n, sets)

    def to_dict(self) -> dict:
        return {"n": self.n, "purchases": [sorted(s) for s in self.purchases]}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> StrategyProfile:
        """Build a profile where the first endpoint of each pair is the buyer."""
        sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n):
                raise ProfileError(f"edge ({u}, {v}) has out-of-range buyer")
            sets[u].add(v)
        return cls(n, sets)


@dataclass(frozen=True)
class AttackOutcome:
    seed_vertex: int
    dead: frozenset[int]
    survivor_components: tuple[frozenset[int], ...]

    def benefit(self, player: int) -> int:
        """Connectivity benefit of ``player``: her survivor component size, 0 if dead."""
        for comp in self.survivor_components:
            if player in comp:
                return len(comp)
        return 0


@dataclass(frozen=True)
class UtilityVector:
    benefits: np.ndarray
    costs: np.ndarray
    utilities: np.ndarray = field(init=False)
    welfare: float = field(init=False)

    def __post_init__(self):
        u = np.asarray(self.benefits, dtype=float) - np.asarray(self.costs, dtype=float)
        object.__setattr__(self, "utilities", u)
        object.__setattr__(self, "welfare", math.fsum(u))

    @property
    def total_benefit(self) -> float:
        return math.fsum(self.benefits)

    def __getitem__(self, i: int) -> float:
        return float(self.utilities[i])

    def __len__(self):
        return len(self.utilities)


def induced_graph(profile: StrategyProfile) -> nx.Graph:
    """Undirected game graph; every edge carries a ``buyers`` tuple."""
    g = nx.Graph()
    g.add_nodes_from(range(profile.n))
    for (u, v), b in profile.buyers().items():
        g.add_edge(u, v, buyers=b)
    return g


def _edge_arrays(edges):
    if len(edges) == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    arr = np.asarray(edges, dtype=np.int64)
    return arr[:, 0].copy(), arr[:, 1].copy()


def _graph_edges(graph) -> tuple[int, list[tuple[int, int]]]:
    if isinstance(graph, StrategyProfile):
        return graph.n, graph.edges()
    nodes = sorted(graph.nodes)
    if nodes != list(range(len(nodes))):
        raise ProfileError("graph nodes must be labelled 0..n-1")
    return len(nodes), sorted((min(u, v), max(u, v)) for u, v in graph.edges)


def _dead_set_table(n: int, edges: Sequence[tuple[int, int]], p: float,
                    max_edges: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows of ``alive`` flags, one per possible killed set, and their masses.

    The mass of a killed set D is Pr[seed in D and D is the seed's
    component of G[p]] under a uniform seed. p in {0, 1} is handled
    directly; otherwise all 2^|E| retained-edge subsets are enumerated.
    """
    if p == 0.0 or not edges:
        return ~np.eye(n, dtype=np.bool_), np.full(n, 1.0 / n)
    if p == 1.0:
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(edges)
        comps = sorted((sorted(c) for c in nx.connected_components(g)), key=min)
        alive = np.ones((len(comps), n), dtype=np.bool_)
        for r, comp in enumerate(comps):
            alive[r, comp] = False
        return alive, np.array([len(c) / n for c in comps])
    m = len(edges)
    if m > max_edges:
        raise EnumerationCapError(
            f"exact enumeration needs 2^{m} subsets (cap is {max_edges} edges); "
            "use monte_carlo_utilities instead")
    touched = sorted({x for e in edges for x in e})
    if len(touched) > 63:
        raise EnumerationCapError("exact enumeration supports at most 63 non-isolated vertices")
    local = {v: i for i, v in enumerate(touched)}
    lu, lv = _edge_arrays([(local[u], local[v]) for u, v in edges])
    nt = len(touched)
    weights_by_kept = np.array([p ** k * (1.0 - p) ** (m - k) for k in range(m + 1)]) / n
    bits = np.arange(m, dtype=np.int64)
    acc: dict[int, float] = {}
    total = 1 << m
    for lo in range(0, total, _CHUNK):
        subsets = np.arange(lo, min(total, lo + _CHUNK), dtype=np.int64)
        kept = ((subsets[:, None] >> bits) & 1).astype(np.bool_)
        w = weights_by_kept[kept.sum(axis=1)]
        labels = _kernels.component_labels(nt, lu, lv, kept)
        keys = _kernels.component_masks(labels).ravel()
        uniq, inv = np.unique(keys, return_inverse=True)
        sums = np.bincount(inv, weights=np.repeat(w, nt), minlength=len(uniq))
        for k, s in zip(uniq.tolist(), sums.tolist()):
            acc[k] = acc.get(k, 0.0) + s
    keys = np.array(sorted(acc), dtype=np.int64)
    isolated = [v for v in range(n) if v not in local]
    alive = np.ones((len(keys) + len(isolated), n), dtype=np.bool_)
    alive[:len(keys), touched] = ((keys[:, None] >> np.arange(nt, dtype=np.int64)) & 1) == 0
    for r, v in enumerate(isolated, start=len(keys)):
        alive[r, v] = False
    weights = np.array([acc[k] for k in keys.tolist()] + [1.0 / n] * len(isolated))
    return alive, weights


def dead_set_masses(n: int, edges: Sequence[tuple[int, int]], p: float,
                    max_edges: int = DEFAULT_MAX_EDGES) -> dict[frozenset[int], float]:
    """Map each possible killed set D to Pr[seed in D and D is the seed's G[p] component]."""
    alive, weights = _dead_set_table(n, list(edges), p, max_edges)
    return {frozenset(np.flatnonzero(~row).tolist()): float(w) for row, w in zip(alive, weights)}


def survivor_sizes(n: int, edges: Sequence[tuple[int, int]], alive: np.ndarray) -> np.ndarray:
    """Row k: each vertex's component size in G restricted to ``alive[k]`` (0 when dead)."""
    eu, ev = _edge_arrays(edges)
    out = np.zeros(alive.shape, dtype=np.int64)
    for lo in range(0, alive.shape[0], _CHUNK):
        chunk = alive[lo:lo + _CHUNK]
        active = chunk[:, eu] & chunk[:, ev]
        labels = _kernels.component_labels(n, eu, ev, active)
        out[lo:lo + len(chunk)] = _kernels.alive_component_sizes(labels, chunk)
    return out


def expected_benefits(graph, p: float, max_edges: int = DEFAULT_MAX_EDGES) -> np.ndarray:
    """Exact expected connectivity benefit of every vertex (no edge costs)."""
    n, edges = _graph_edges(graph)
    alive, weights = _dead_set_table(n, edges, p, max_edges)
    return weights @ survivor_sizes(n, edges, alive)


def exact_utilities(profile: StrategyProfile, params: GameParams,
                    max_edges: int = DEFAULT_MAX_EDGES) -> UtilityVector:
    """Exact expected utilities by enumerating every percolation outcome.

    Cost is 2^|E| subset evaluations, so instances beyond ``max_edges``
    raise :class:`EnumerationCapError`.
    """
    b = expected_benefits(profile, params.p, max_edges)
    return UtilityVector(b, profile.costs(params.c))


def closed_form_star(n: int, params: GameParams) -> float:
    """Expected total connectivity benefit of the hub-spoke network on n vertices."""
    if n < 3:
        raise ProfileError("closed_form_star needs n >= 3")
    p = params.p
    leaf_attack = (1 - p) * (n - 1) ** 2 + p * (n - 2) * (1 - p)
    return (n - 1) / n * leaf_attack + (n - 1) * (1 - p) / n


# --- JSON graph files -----------------------------------------------------

def profile_from_json(data: Mapping) -> tuple[StrategyProfile, GameParams | None]:
    """Parse ``{"n": .., "purchases": [[..], ..], "params": {"c": .., "p": ..}}``."""
    if not isinstance(data, Mapping):
        raise ProfileError("graph file must hold a JSON object")
    if "n" not in data:
        raise ProfileError("missing field 'n'")
    if "purchases" not in data:
        raise ProfileError("missing field 'purchases'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ProfileError(f"field 'n' must be an integer, got {n!r}")
    purchases = data["purchases"]
    if not isinstance(purchases, list) or not all(isinstance(s, list) for s in purchases):
        raise ProfileError("field 'purchases' must be a list of integer lists")
    for i, s in enumerate(purchases):
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in s):
            raise ProfileError(f"field 'purchases[{i}]' must contain integers only")
    profile = StrategyProfile(n, purchases)
    params = None
    if data.get("params") is not None:
        raw = data["params"]
        if not isinstance(raw, Mapping):
            raise ProfileError("field 'params' must be an object")
        try:
            params = GameParams(float(raw["c"]), float(raw["p"]))
        except KeyError as exc:
            raise ProfileError(f"missing field 'params.{exc.args[0]}'") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ProfileError):
                raise
            raise ProfileError(f"field 'params' has non-numeric values: {raw!r}") from None
    return profile, params


def profile_to_json(profile: StrategyProfile, params: GameParams | None = None) -> dict:
    out = profile.to_dict()
    if params is not None:
        out["params"] = {"c": params.c, "p": params.p}
    return out


def load_profile(path) -> tuple[StrategyProfile, GameParams | None]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProfileError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return profile_from_json(data)
