"""Percolation sampling, single-attack simulation and Monte Carlo utilities."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy import stats

from . import _kernels
from .game import (AttackOutcome, GameParams, ProfileError, StrategyProfile,
                   _edge_arrays, _graph_edges)

CHUNK_SAMPLES = 1 << 16


@dataclass(frozen=True)
class PercolationSample:
    kept_edges: tuple[tuple[int, int], ...]
    components: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class UtilityEstimate:
    mean: float
    half_width: float
    samples: int
    confidence: float
    rng_seed: int

    @property
    def lower(self) -> float:
        return self.mean - self.half_width

    @property
    def upper(self) -> float:
        return self.mean + self.half_width

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class MonteCarloUtilities:
    players: tuple[UtilityEstimate, ...]
    welfare: UtilityEstimate
    benefit_std: np.ndarray

    @property
    def means(self) -> np.ndarray:
        return np.array([e.mean for e in self.players])

    def __getitem__(self, i: int) -> UtilityEstimate:
        return self.players[i]

    def __len__(self):
        return len(self.players)


@dataclass(frozen=True)
class ProportionEstimate:
    """Binomial proportion with a Clopper-Pearson interval."""

    estimate: float
    lower: float
    upper: float
    successes: int
    trials: int
    confidence: float

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def hoeffding_half_width(value_range: float, samples: int, confidence: float) -> float:
    return value_range * math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * samples))


def samples_for_accuracy(n: int, eps: float, delta: float) -> int:
    """Samples for a Hoeffding interval of half-width ``eps`` at level 1 - delta on [0, n]."""
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return math.ceil(n * n * math.log(2.0 / delta) / (2.0 * eps * eps))


def proportion_interval(successes: int, trials: int, confidence: float = 0.99) -> ProportionEstimate:
    alpha = 1.0 - confidence
    k, t = int(successes), int(trials)
    lo = 0.0 if k == 0 else float(stats.beta.ppf(alpha / 2, k, t - k + 1))
    hi = 1.0 if k == t else float(stats.beta.ppf(1 - alpha / 2, k + 1, t - k))
    return ProportionEstimate(k / t, lo, hi, k, t, confidence)


def _rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample_percolation(graph, p: float, rng=None) -> PercolationSample:
    """Keep each edge independently with probability ``p``.

    Edges are visited in sorted order and kept iff their uniform draw is
    below ``p``, so the same generator state couples samples across p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n, edges = _graph_edges(graph)
    u = _rng(rng).random(len(edges))
    kept = tuple(e for e, x in zip(edges, u) if x < p)
    h = nx.Graph()
    h.add_nodes_from(range(n))
    h.add_edges_from(kept)
    comps = sorted((frozenset(c) for c in nx.connected_components(h)), key=min)
    return PercolationSample(kept, tuple(comps))


def simulate_attack(graph, p: float, rng=None, seed_vertex: int | None = None) -> AttackOutcome:
    """One attack: uniform seed, kill its G[p] component, split the survivors in G."""
    gen = _rng(rng)
    n, edges = _graph_edges(graph)
    if seed_vertex is None:
        seed_vertex = int(gen.integers(n))
    perc = sample_percolation(graph, p, gen)
    dead = next(c for c in perc.components if seed_vertex in c)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    rest = g.subgraph(set(range(n)) - dead)
    comps = sorted((frozenset(c) for c in nx.connected_components(rest)), key=min)
    return AttackOutcome(seed_vertex, dead, tuple(comps))


def _csr(n, edges):
    eu, ev = _edge_arrays(edges)
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    indptr = np.cumsum(indptr)
    keys = _kernels.edge_keys(src, dst, n)
    return indptr, dst.astype(np.int64), keys


def attack_benefit_totals(n: int, edges, p: float, samples: int, rng_seed: int = 0,
                          workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Per-player sums (and sums of squares) of sampled connectivity benefits.

    Samples are split into fixed chunks whose partial sums are combined in
    index order, so the result is independent of ``workers``.
    """
    indptr, indices, keys = _csr(n, edges)
    seed = np.uint64(rng_seed & 0xFFFFFFFFFFFFFFFF)
    bounds = [(lo, min(samples, lo + CHUNK_SAMPLES)) for lo in range(0, samples, CHUNK_SAMPLES)]

    def run(b):
        return _kernels.attack_benefit_sums(n, indptr, indices, keys, float(p), seed, b[0], b[1])

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    sums = np.sum([s for s, _ in parts], axis=0)
    sq = np.sum([q for _, q in parts], axis=0)
    return sums, sq


def monte_carlo_utilities(profile: StrategyProfile, params: GameParams, samples: int | None = None, *,
                          eps: float | None = None, delta: float | None = None,
                          confidence: float = 0.99, rng_seed: int = 0,
                          workers: int = 1) -> MonteCarloUtilities:
    """Monte Carlo utilities with Hoeffding intervals.

    Either pass ``samples`` or a target accuracy ``(eps, delta)``; in the
    latter case the sample count makes every player's half-width at most
    ``eps`` at confidence ``1 - delta``. All players share the same attack
    draws in each sample.
    """
    n = profile.n
    if samples is None:
        if eps is None or delta is None:
            raise ValueError("pass either samples or both eps and delta")
        samples = samples_for_accuracy(n, eps, delta)
        confidence = 1.0 - delta
    if not isinstance(samples, (int, np.integer)) or samples < 1:
        raise ValueError(f"samples must be a positive integer, got {samples!r}")
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    samples = int(samples)
    sums, sq = attack_benefit_totals(n, profile.edges(), params.p, samples, rng_seed, workers)
    mean_b = sums / samples
    var = np.maximum(sq / samples - mean_b ** 2, 0.0)
    costs = profile.costs(params.c)
    hw = hoeffding_half_width(n, samples, confidence)
    players = tuple(UtilityEstimate(float(mean_b[i] - costs[i]), hw, samples, confidence, rng_seed)
                    for i in range(n))
    welfare = UtilityEstimate(math.fsum(e.mean for e in players),
                              hoeffding_half_width(n * n, samples, confidence),
                              samples, confidence, rng_seed)
    return MonteCarloUtilities(players, welfare, np.sqrt(var))

