"""Individual rationality, blocking pairs, stability, and the brute-force
stable-set enumerator that serves as the ground-truth oracle for everything
the solver produces.

The enumerator literally scans all 2^(n*m) edge sets.  The scan is vectorized
with numpy (chunked, so memory stays bounded) but its semantics are exactly
the definitional test applied to every edge subset; tests cross-check it
against a plain-Python scan on small markets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

import numpy as np

from .core import (
    AgentId,
    Matching,
    PreferenceRelation,
    Profile,
    Side,
    UnsupportedSizeError,
    choice,
    choice_mask,
    matched_set,
)

DEFAULT_MAX_EDGES = 25
_CHUNK = 1 << 20


@dataclass(frozen=True)
class BlockingPair:
    firm: AgentId
    worker: AgentId


@dataclass(frozen=True)
class StableSet:
    """All stable matchings of one profile, ordered by edge-mask encoding."""

    matchings: tuple[Matching, ...]

    def __iter__(self) -> Iterator[Matching]:
        return iter(self.matchings)

    def __len__(self) -> int:
        return len(self.matchings)

    def __getitem__(self, i: int) -> Matching:
        return self.matchings[i]

    def __contains__(self, mu: Matching) -> bool:
        return mu in self.matchings


def is_individually_rational(mu: Matching, p: Profile) -> tuple[bool, tuple[AgentId, ...]]:
    """True when no agent would drop part of its own assignment."""
    violators = tuple(
        a for a in p.agents() if choice(matched_set(mu, a), p[a]) != matched_set(mu, a)
    )
    return (not violators, violators)


def blocking_pairs(mu: Matching, p: Profile) -> tuple[BlockingPair, ...]:
    """All unmatched firm-worker pairs who each choose the other alongside
    their current partners, ordered by (firm, worker) index."""
    firm_views = [matched_set(mu, AgentId(Side.FIRM, f)).mask for f in range(p.num_firms)]
    worker_views = [matched_set(mu, AgentId(Side.WORKER, w)).mask for w in range(p.num_workers)]
    found = []
    for f in range(p.num_firms):
        fpref = p.firm_prefs[f]
        for w in range(p.num_workers):
            if firm_views[f] >> w & 1:
                continue
            if not choice_mask(firm_views[f] | 1 << w, fpref) >> w & 1:
                continue
            if choice_mask(worker_views[w] | 1 << f, p.worker_prefs[w]) >> f & 1:
                found.append(BlockingPair(AgentId(Side.FIRM, f), AgentId(Side.WORKER, w)))
    return tuple(found)


def is_stable(mu: Matching, p: Profile) -> bool:
    """Individually rational and free of blocking pairs."""
    ok, _ = is_individually_rational(mu, p)
    return ok and not blocking_pairs(mu, p)


def _choice_table(pref: PreferenceRelation, opposite_count: int) -> np.ndarray:
    """choice_mask for every subset of the opposite side, as a lookup array."""
    size = 1 << opposite_count
    subsets = np.arange(size, dtype=np.int64)
    table = np.zeros(size, dtype=np.int64)
    taken = np.zeros(size, dtype=bool)
    for entry in pref.ranked:
        hit = ~taken & ((subsets & entry.mask) == entry.mask)
        table[hit] = entry.mask
        taken |= hit
    return table


def _matching_from_mask(mask: int, num_workers: int) -> Matching:
    edges = []
    bit = 0
    while mask >> bit:
        if mask >> bit & 1:
            edges.append((bit // num_workers, bit % num_workers))
        bit += 1
    return Matching.from_pairs(edges)


@lru_cache(maxsize=1024)
def _enumerate_cached(p: Profile, max_edges: int) -> StableSet:
    n, m = p.num_firms, p.num_workers
    bits = n * m
    if bits > max_edges:
        raise UnsupportedSizeError(
            f"enumeration scans 2^(n*m) edge sets; n*m = {bits} exceeds the cap of {max_edges}"
        )
    firm_tables = [_choice_table(p.firm_prefs[f], m) for f in range(n)]
    worker_tables = [_choice_table(p.worker_prefs[w], n) for w in range(m)]

    stable_masks: list[int] = []
    total = 1 << bits
    for lo in range(0, total, _CHUNK):
        masks = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        ok = np.ones(masks.shape, dtype=bool)

        firm_views = []
        for f in range(n):
            view = (masks >> (f * m)) & ((1 << m) - 1)
            firm_views.append(view)
            ok &= firm_tables[f][view] == view
        worker_views = []
        for w in range(m):
            view = np.zeros(masks.shape, dtype=np.int64)
            for f in range(n):
                view |= ((masks >> (f * m + w)) & 1) << f
            worker_views.append(view)
            ok &= worker_tables[w][view] == view

        for f in range(n):
            for w in range(m):
                no_edge = ((masks >> (f * m + w)) & 1) == 0
                firm_wants = (firm_tables[f][firm_views[f] | (1 << w)] >> w) & 1
                worker_wants = (worker_tables[w][worker_views[w] | (1 << f)] >> f) & 1
                ok &= ~(no_edge & (firm_wants == 1) & (worker_wants == 1))

        stable_masks.extend(int(x) for x in masks[ok])

    return StableSet(tuple(_matching_from_mask(mask, m) for mask in stable_masks))


def enumerate_stable(p: Profile, max_edges: int = DEFAULT_MAX_EDGES) -> StableSet:
    """Exactly the stable matchings of ``p``, canonically ordered.

    Results are memoized per profile; callers share the immutable StableSet.
    """
    return _enumerate_cached(p, max_edges)


def _agents_in(ss: StableSet) -> list[AgentId]:
    firms = sorted({f for mu in ss for (f, _) in mu.edges})
    workers = sorted({w for mu in ss for (_, w) in mu.edges})
    return [AgentId(Side.FIRM, f) for f in firms] + [AgentId(Side.WORKER, w) for w in workers]


def check_same_partner_counts(ss: StableSet) -> tuple[bool, AgentId | None]:
    """Is every agent matched with the same number of partners in every
    member?  (Agents appearing in no member trivially count zero throughout.)"""
    if not ss.matchings:
        raise ValueError("stable set is empty")
    for agent in _agents_in(ss):
        counts = {len(matched_set(mu, agent)) for mu in ss}
        if len(counts) > 1:
            return (False, agent)
    return (True, None)


def check_underfilled_constancy(
    ss: StableSet, quotas: Mapping[AgentId, int]
) -> tuple[bool, AgentId | None]:
    """Does every agent that is under quota somewhere hold the same partner
    set everywhere?  Quotas must cover every agent appearing in the set."""
    if not ss.matchings:
        raise ValueError("stable set is empty")
    appearing = _agents_in(ss)
    for agent in appearing:
        if agent not in quotas:
            raise ValueError(f"no quota supplied for {agent}")
    ordered = sorted(quotas, key=lambda a: (a.side is Side.WORKER, a.index))
    for agent in ordered:
        views = [matched_set(mu, agent) for mu in ss]
        underfilled = any(len(v) < quotas[agent] for v in views)
        if underfilled and len({v.mask for v in views}) > 1:
            return (False, agent)
    return (True, None)


def clear_enumeration_cache() -> None:
    _enumerate_cached.cache_clear()


__all__ = [
    "BlockingPair",
    "StableSet",
    "DEFAULT_MAX_EDGES",
    "is_individually_rational",
    "blocking_pairs",
    "is_stable",
    "enumerate_stable",
    "check_same_partner_counts",
    "check_underfilled_constancy",
    "clear_enumeration_cache",
]
