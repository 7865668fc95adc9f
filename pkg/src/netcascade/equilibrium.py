"""Equilibrium checks under declared deviation classes and best responses.

Exact mode compares enumerated utilities. Monte Carlo mode compares
Hoeffding intervals and only reports a violation when the deviated
interval sits entirely above the baseline interval plus ``eps``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cascade import (UtilityEstimate, attack_benefit_totals, hoeffding_half_width,
                      samples_for_accuracy)
from .game import (DEFAULT_MAX_EDGES, EnumerationCapError, GameParams, ProfileError,
                   StrategyProfile, expected_benefits)

DEFAULT_FULL_CAP = 8


class DeviationClass(str, Enum):
    DROP = "drop"
    ADD = "add"
    SWAP = "swap"
    FULL = "full"


class Verdict(str, Enum):
    VIOLATION = "BeneficialViolation"
    NONE = "NoViolation"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DeviationReport:
    player: int
    strategy: frozenset[int]
    dropped: frozenset[int]
    added: frozenset[int]
    baseline: float | UtilityEstimate
    deviated: float | UtilityEstimate
    verdict: Verdict
    margin: float

    def to_dict(self) -> dict:
        def val(x):
            if isinstance(x, UtilityEstimate):
                return {"mean": x.mean, "half_width": x.half_width, "samples": x.samples}
            return x
        return {"player": self.player, "strategy": sorted(self.strategy),
                "dropped": sorted(self.dropped), "added": sorted(self.added),
                "baseline": val(self.baseline), "deviated": val(self.deviated),
                "verdict": self.verdict.value, "margin": self.margin}


@dataclass(frozen=True)
class BestResponse:
    player: int
    strategy: frozenset[int]
    utility: float
    current_utility: float

    @property
    def improves(self) -> bool:
        return self.utility > self.current_utility + _tol(self.current_utility)


def _tol(x: float) -> float:
    return 1e-9 * max(1.0, abs(x))


def _others(profile: StrategyProfile, player: int) -> list[int]:
    return [j for j in range(profile.n) if j != player]


def deviations(profile: StrategyProfile, player: int, deviation_class, full_cap: int = DEFAULT_FULL_CAP):
    """Alternative purchase sets for ``player`` in a fixed, deterministic order.

    Single-edge additions skip partners who already bought an edge to the
    player, since a duplicate purchase only adds cost.
    """
    cls = DeviationClass(deviation_class)
    s = profile.purchases[player]
    linked = {j for j in range(profile.n) if player in profile.purchases[j]}
    fresh = [j for j in _others(profile, player) if j not in s and j not in linked]
    if cls is DeviationClass.DROP:
        return [s - {j} for j in sorted(s)]
    if cls is DeviationClass.ADD:
        return [s | {j} for j in fresh]
    if cls is DeviationClass.SWAP:
        return [(s - {j}) | {k} for j in sorted(s) for k in fresh]
    if profile.n > full_cap:
        raise EnumerationCapError(f"full deviation search is capped at n={full_cap} players, got n={profile.n}")
    others = _others(profile, player)
    out = []
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            if frozenset(combo) != s:
                out.append(frozenset(combo))
    return out


class _BenefitCache:
    """Exact benefit vectors keyed by edge set; costs never enter."""

    def __init__(self, p: float, max_edges: int):
        self.p = p
        self.max_edges = max_edges
        self._store: dict[tuple, np.ndarray] = {}

    def __call__(self, profile: StrategyProfile) -> np.ndarray:
        key = (profile.n, tuple(profile.edges()))
        if key not in self._store:
            self._store[key] = expected_benefits(profile, self.p, self.max_edges)
        return self._store[key]


def check_equilibrium(profile: StrategyProfile, params: GameParams, deviation_class="drop",
                      mode: str = "exact", *, eps: float = 0.0, delta: float | None = None,
                      rng_seed: int = 0, players=None, max_edges: int = DEFAULT_MAX_EDGES,
                      full_cap: int = DEFAULT_FULL_CAP, workers: int = 1) -> list[DeviationReport]:
    """Evaluate every deviation in the class for every player.

    Reports are ordered by player, then by the order of :func:`deviations`.
    """
    players = range(profile.n) if players is None else players
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    if mode == "exact":
        return _check_exact(profile, params, deviation_class, eps, players, max_edges, full_cap)
    if mode != "mc":
        raise ValueError(f"mode must be 'exact' or 'mc', got {mode!r}")
    if not eps > 0 or delta is None or not 0 < delta < 1:
        raise ValueError("mc mode needs eps > 0 and delta in (0, 1)")
    samples = samples_for_accuracy(profile.n, eps, delta)
    hw = hoeffding_half_width(profile.n, samples, 1 - delta)
    mean_benefits: dict[tuple, np.ndarray] = {}

    def estimate(prof, i):
        key = tuple(prof.edges())
        if key not in mean_benefits:
            sums, _ = attack_benefit_totals(prof.n, list(key), params.p, samples, rng_seed, workers)
            mean_benefits[key] = sums / samples
        mean = mean_benefits[key][i] - len(prof.purchases[i]) * params.c
        return UtilityEstimate(float(mean), hw, samples, 1 - delta, rng_seed)

    reports = []
    for i in players:
        base = estimate(profile, i)
        for strat in deviations(profile, i, deviation_class, full_cap):
            dev = estimate(profile.with_strategy(i, strat), i)
            if dev.lower > base.upper + eps:
                verdict = Verdict.VIOLATION
            elif dev.upper <= base.lower + eps:
                verdict = Verdict.NONE
            else:
                verdict = Verdict.INCONCLUSIVE
            reports.append(_report(profile, i, strat, base, dev, verdict, dev.mean - base.mean))
    return reports


def _report(profile, i, strat, base, dev, verdict, margin):
    s = profile.purchases[i]
    return DeviationReport(i, frozenset(strat), frozenset(s - strat), frozenset(strat - s),
                           base, dev, verdict, float(margin))


def _check_exact(profile, params, deviation_class, eps, players, max_edges, full_cap):
    benefits = _BenefitCache(params.p, max_edges)
    base_b = benefits(profile)
    reports = []
    for i in players:
        base = float(base_b[i] - len(profile.purchases[i]) * params.c)
        for strat in deviations(profile, i, deviation_class, full_cap):
            dev_prof = profile.with_strategy(i, strat)
            dev = float(benefits(dev_prof)[i] - len(strat) * params.c)
            margin = dev - base
            verdict = Verdict.VIOLATION if margin > eps + _tol(base) else Verdict.NONE
            reports.append(_report(profile, i, strat, base, dev, verdict, margin))
    return reports


def is_equilibrium(reports: list[DeviationReport]) -> bool:
    """True when every report certifies the absence of a beneficial deviation."""
    return all(r.verdict is Verdict.NONE for r in reports)


def best_response(profile: StrategyProfile, params: GameParams, player: int,
                  max_players: int = DEFAULT_FULL_CAP, max_edges: int = DEFAULT_MAX_EDGES) -> BestResponse:
    """Exhaustive best response; ties go to the lexicographically smallest set."""
    if profile.n > max_players:
        raise EnumerationCapError(f"best_response is capped at n={max_players} players, got n={profile.n}")
    if not 0 <= player < profile.n:
        raise ProfileError(f"player {player} out of range")
    benefits = _BenefitCache(params.p, max_edges)
    others = _others(profile, player)
    scored = []
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            prof = profile.with_strategy(player, combo)
            scored.append((float(benefits(prof)[player] - r * params.c), combo))
    best = max(u for u, _ in scored)
    u, combo = min((x for x in scored if x[0] >= best - _tol(best)), key=lambda x: x[1])
    current = float(benefits(profile)[player] - len(profile.purchases[player]) * params.c)
    return BestResponse(player, frozenset(combo), u, current)


def best_response_dynamics(profile: StrategyProfile, params: GameParams, max_rounds: int = 20,
                           max_players: int = DEFAULT_FULL_CAP):
    """Round-robin best responses until a full round changes nothing or the cap hits.

    Returns ``(profile, rounds_run, settled)``; no convergence is implied.
    """
    for rnd in range(1, max_rounds + 1):
        changed = False
        for i in range(profile.n):
            br = best_response(profile, params, i, max_players)
            if br.improves:
                profile = profile.with_strategy(i, br.strategy)
                changed = True
        if not changed:
            return profile, rnd, True
    return profile, max_rounds, False


def join_benefit_bound(n: int, n0: int, n1: int) -> float:
    """Lower bound on the benefit gained when a vertex of an n0-component links to an n1-component."""
    if min(n, n0, n1) < 1 or n0 > n1 or n0 + n1 > n:
        raise ValueError(f"need 1 <= n0 <= n1 and n0 + n1 <= n, got n={n}, n0={n0}, n1={n1}")
    return n1 * (n - 2 * n0 - n1) / n


@dataclass(frozen=True)
class RegionCell:
    p: float
    c: float
    is_equilibrium: bool
    violations: int
    max_margin: float


def equilibrium_region(profile: StrategyProfile, p_values, c_values, deviation_class="full",
                       max_edges: int = DEFAULT_MAX_EDGES, full_cap: int = DEFAULT_FULL_CAP) -> list[RegionCell]:
    """Exact equilibrium status of ``profile`` on a (p, c) grid.

    Benefits do not depend on c, so each p needs one pass over the
    deviations; rows come out p-major in the given order.
    """
    cells = []
    for p in p_values:
        benefits = _BenefitCache(float(p), max_edges)
        base_b = benefits(profile)
        rows = []
        for i in range(profile.n):
            for strat in deviations(profile, i, deviation_class, full_cap):
                gain = benefits(profile.with_strategy(i, strat))[i] - base_b[i]
                rows.append((float(gain), len(strat) - len(profile.purchases[i]), float(base_b[i]),
                             len(profile.purchases[i])))
        for c in c_values:
            margins = [g - dk * c for g, dk, _, _ in rows]
            bad = [m for m, (_, _, b, k) in zip(margins, rows) if m > _tol(b - k * c)]
            cells.append(RegionCell(float(p), float(c), not bad, len(bad),
                                    max(margins) if margins else float("-inf")))
    return cells
