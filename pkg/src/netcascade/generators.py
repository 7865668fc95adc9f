"""Named topologies as strategy profiles with explicit buyers.

Orientation conventions: spokes buy toward the hub, cycle vertex i buys
the edge to i+1, and in a linear-paths network every path between the two
junction vertices is bought from both ends toward its middle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import ProfileError, StrategyProfile

FAMILIES = ("empty", "hub-spoke", "cycle", "linear-paths", "tree", "complete",
            "erdos-renyi", "two-hub-spoke")


@dataclass(frozen=True)
class TopologySpec:
    family: str
    n: int
    arity: int = 2
    q: float = 0.0
    seed: int | None = None
    orientation: str = "inward"


def empty(n: int) -> StrategyProfile:
    return StrategyProfile(n)


def hub_spoke(n: int, hub: int = 0, offset: int = 0, total: int | None = None) -> StrategyProfile:
    """Star on ``n`` vertices; every leaf buys its edge to the hub."""
    if n < 2:
        raise ProfileError(f"hub-spoke needs n >= 2, got {n}")
    total = n if total is None else total
    sets = [set() for _ in range(total)]
    for v in range(offset, offset + n):
        if v != offset + hub:
            sets[v].add(offset + hub)
    return StrategyProfile(total, sets)


def two_hub_spoke(n: int) -> StrategyProfile:
    """Two disjoint stars of size n/2 with hubs 0 and n/2."""
    if n < 4 or n % 2:
        raise ProfileError(f"two-hub-spoke needs an even n >= 4, got {n}")
    half = n // 2
    a = hub_spoke(half, total=n)
    b = hub_spoke(half, offset=half, total=n)
    return StrategyProfile(n, [x | y for x, y in zip(a.purchases, b.purchases)])


def cycle(n: int) -> StrategyProfile:
    if n < 3:
        raise ProfileError(f"cycle needs n >= 3, got {n}")
    return StrategyProfile(n, [{(i + 1) % n} for i in range(n)])


def _path_inward(sets, path, orientation):
    k = len(path) - 1
    for j in range(k):
        a, b = path[j], path[j + 1]
        if orientation == "forward" or 2 * j < k:
            sets[a].add(b)
        else:
            sets[b].add(a)


def linear_paths(n: int, orientation: str = "inward") -> StrategyProfile:
    """Three internally disjoint paths of equal length between vertices 0 and 1.

    Two of the paths form the outer cycle, the third runs through the
    middle; n = 2 + 3(L - 1) for path length L >= 2 (n = 11 gives L = 4).
    ``orientation="inward"`` buys every path from both ends toward its
    middle; ``"forward"`` buys every edge in the direction 0 -> 1.
    """
    if orientation not in ("inward", "forward"):
        raise ProfileError(f"unknown orientation {orientation!r}")
    if n < 5 or (n - 2) % 3:
        raise ProfileError(f"linear-paths needs n = 2 + 3(L-1) with L >= 2, got n={n}")
    inner = (n - 2) // 3
    sets: list[set[int]] = [set() for _ in range(n)]
    nxt = 2
    for _ in range(3):
        path = [0] + list(range(nxt, nxt + inner)) + [1]
        nxt += inner
        _path_inward(sets, path, orientation)
    return StrategyProfile(n, sets)


def tree(n: int, arity: int = 2) -> StrategyProfile:
    """Complete ``arity``-ary tree in heap order; children buy toward their parent."""
    if n < 1 or arity < 1:
        raise ProfileError(f"tree needs n >= 1 and arity >= 1, got n={n}, arity={arity}")
    return StrategyProfile(n, [set() if i == 0 else {(i - 1) // arity} for i in range(n)])


def complete(n: int) -> StrategyProfile:
    """K_n with the lower-indexed endpoint as buyer."""
    return StrategyProfile(n, [set(range(i + 1, n)) for i in range(n)])


def erdos_renyi(n: int, q: float, seed=None) -> StrategyProfile:
    """G(n, q); pairs are drawn in (i, j), i < j, row-major order and bought by i."""
    if not 0.0 <= q <= 1.0:
        raise ProfileError(f"q must lie in [0, 1], got {q}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < q
    sets: list[set[int]] = [set() for _ in range(n)]
    for i, j in zip(iu[keep].tolist(), ju[keep].tolist()):
        sets[i].add(j)
    return StrategyProfile(n, sets)


def generate(spec: TopologySpec | str, n: int | None = None, **kwargs) -> StrategyProfile:
    if isinstance(spec, str):
        spec = TopologySpec(spec, n, **kwargs)
    fam = spec.family.replace("_", "-").lower()
    if fam == "empty":
        return empty(spec.n)
    if fam == "hub-spoke":
        return hub_spoke(spec.n)
    if fam == "two-hub-spoke":
        return two_hub_spoke(spec.n)
    if fam == "cycle":
        return cycle(spec.n)
    if fam == "linear-paths":
        return linear_paths(spec.n, spec.orientation)
    if fam == "tree":
        return tree(spec.n, spec.arity)
    if fam == "complete":
        return complete(spec.n)
    if fam == "erdos-renyi":
        return erdos_renyi(spec.n, spec.q, spec.seed)
    raise ProfileError(f"unknown family {spec.family!r}; choose from {', '.join(FAMILIES)}")
