"""Compiled inner loops shared by the exact enumerator and the samplers.

Random draws inside ``attack_benefit_sums`` come from a counter-based
splitmix64 hash of (master seed, sample index, edge key), so every sample
owns an independent stream and results do not depend on how the sample
range is split across workers.
"""
import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True, nogil=True)
def splitmix64(x):
    x = x + _GOLDEN
    x = (x ^ (x >> np.uint64(30))) * _M1
    x = (x ^ (x >> np.uint64(27))) * _M2
    return x ^ (x >> np.uint64(31))


@njit(cache=True, nogil=True)
def _unit(x):
    return np.float64(x >> np.uint64(11)) * _INV53


def edge_keys(eu, ev, n):
    """Hash keys for undirected edges; depend only on the endpoint pair."""
    lo = np.minimum(eu, ev).astype(np.uint64)
    hi = np.maximum(eu, ev).astype(np.uint64)
    raw = lo * np.uint64(n) + hi
    return _hash_array(raw)


@njit(cache=True)
def _hash_array(raw):
    out = np.empty(raw.shape[0], dtype=np.uint64)
    for i in range(raw.shape[0]):
        out[i] = splitmix64(raw[i] ^ np.uint64(0xD1B54A32D192ED03))
    return out


@njit(cache=True, nogil=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True, nogil=True)
def component_labels(n, eu, ev, kept):
    """Label vertices by the smallest vertex of their component, per row of ``kept``."""
    rows = kept.shape[0]
    m = eu.shape[0]
    out = np.empty((rows, n), dtype=np.int64)
    parent = np.empty(n, dtype=np.int64)
    for r in range(rows):
        for i in range(n):
            parent[i] = i
        for e in range(m):
            if kept[r, e]:
                a = _find(parent, eu[e])
                b = _find(parent, ev[e])
                if a < b:
                    parent[b] = a
                elif b < a:
                    parent[a] = b
        for i in range(n):
            out[r, i] = _find(parent, i)
    return out


@njit(cache=True, nogil=True)
def component_masks(labels):
    """Bitmask of each vertex's component (requires n <= 63)."""
    rows, n = labels.shape
    out = np.empty((rows, n), dtype=np.int64)
    acc = np.zeros(n, dtype=np.int64)
    for r in range(rows):
        for i in range(n):
            acc[i] = 0
        for i in range(n):
            acc[labels[r, i]] |= np.int64(1) << np.int64(i)
        for i in range(n):
            out[r, i] = acc[labels[r, i]]
    return out


@njit(cache=True, nogil=True)
def alive_component_sizes(labels, alive):
    """Size of each alive vertex's component; zero for dead vertices."""
    rows, n = labels.shape
    out = np.zeros((rows, n), dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    for r in range(rows):
        for i in range(n):
            counts[i] = 0
        for i in range(n):
            if alive[r, i]:
                counts[labels[r, i]] += 1
        for i in range(n):
            if alive[r, i]:
                out[r, i] = counts[labels[r, i]]
    return out


@njit(cache=True, nogil=True)
def attack_benefit_sums(n, indptr, indices, ekey, p, seed, start, stop):
    """Sum of post-attack component sizes per player over samples [start, stop).

    Each sample picks a uniform seed vertex, kills its component in G[p]
    (coins flipped lazily, keyed by edge), then measures the components of
    G restricted to the survivors.
    """
    sums = np.zeros(n, dtype=np.float64)
    sq = np.zeros(n, dtype=np.float64)
    dead = np.zeros(n, dtype=np.bool_)
    seen = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    members = np.empty(n, dtype=np.int64)
    for s in range(start, stop):
        base = splitmix64(seed ^ splitmix64(np.uint64(s)))
        for i in range(n):
            dead[i] = False
            seen[i] = False
        v = np.int64(_unit(splitmix64(base)) * n)
        if v >= n:
            v = n - 1
        dead[v] = True
        top = 0
        stack[top] = v
        top += 1
        while top > 0:
            top -= 1
            x = stack[top]
            for idx in range(indptr[x], indptr[x + 1]):
                w = indices[idx]
                if not dead[w]:
                    if _unit(splitmix64(base ^ ekey[idx])) < p:
                        dead[w] = True
                        stack[top] = w
                        top += 1
        for i in range(n):
            if dead[i] or seen[i]:
                continue
            seen[i] = True
            count = 0
            top = 0
            stack[top] = i
            top += 1
            while top > 0:
                top -= 1
                x = stack[top]
                members[count] = x
                count += 1
                for idx in range(indptr[x], indptr[x + 1]):
                    w = indices[idx]
                    if not dead[w] and not seen[w]:
                        seen[w] = True
                        stack[top] = w
                        top += 1
            for j in range(count):
                sums[members[j]] += count
                sq[members[j]] += count * count
    return sums, sq
