"""Core types for many-to-many matching markets.

Two disjoint sides (firms and workers); every agent holds a strict ranking
over subsets of the opposite side, written as an ordered list of acceptable
sets with the empty set as the implicit worst acceptable outcome.  A matching
is an arbitrary set of firm-worker edges.  Partner sets are bitmasks over
agent indices, capped at 32 agents per side.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

MAX_SIDE = 32


class MatchingError(Exception):
    """Base class for domain errors raised by this package."""


class UnsupportedSizeError(MatchingError):
    """A market or search space exceeds a hard size cap."""


class PreconditionError(MatchingError):
    """An operation's stated precondition does not hold for the input."""


class NoStableMatchingError(MatchingError):
    """A selection rule was asked to pick from an empty stable set."""


class Side(Enum):
    FIRM = "firm"
    WORKER = "worker"

    @property
    def opposite(self) -> "Side":
        return Side.WORKER if self is Side.FIRM else Side.FIRM


@dataclass(frozen=True)
class AgentId:
    """Identity of one agent: which side it is on, and its index there."""

    side: Side
    index: int

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"agent index must be non-negative, got {self.index}")

    def __str__(self) -> str:
        return f"{self.side.value} {self.index}"


@dataclass(frozen=True)
class PartnerSet:
    """A subset of one side's agents, stored as a bitmask over indices."""

    side: Side
    mask: int = 0

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> MAX_SIDE:
            raise ValueError(f"partner mask out of range (capacity {MAX_SIDE} per side)")

    @classmethod
    def empty(cls, side: Side) -> "PartnerSet":
        return cls(side, 0)

    @classmethod
    def of(cls, side: Side, *indices: int) -> "PartnerSet":
        mask = 0
        for i in indices:
            if not 0 <= i < MAX_SIDE:
                raise ValueError(f"partner index {i} out of range")
            mask |= 1 << i
        return cls(side, mask)

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.mask.bit_length()) if self.mask >> i & 1)

    def __contains__(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def _require_same_side(self, other: "PartnerSet") -> None:
        if self.side is not other.side:
            raise ValueError("partner sets live on different sides")

    def union(self, other: "PartnerSet") -> "PartnerSet":
        self._require_same_side(other)
        return PartnerSet(self.side, self.mask | other.mask)

    def issubset(self, other: "PartnerSet") -> bool:
        self._require_same_side(other)
        return self.mask & ~other.mask == 0

    def with_member(self, index: int) -> "PartnerSet":
        return PartnerSet(self.side, self.mask | 1 << index)

    def without_member(self, index: int) -> "PartnerSet":
        return PartnerSet(self.side, self.mask & ~(1 << index))


@dataclass(frozen=True)
class PreferenceRelation:
    """One agent's strict ranking of acceptable partner sets, best first.

    The empty set never appears in ``ranked``: it is implicitly ranked just
    below the last entry, and every unlisted nonempty set is unacceptable.
    """

    owner: AgentId
    ranked: tuple[PartnerSet, ...]

    def __post_init__(self) -> None:
        want = self.owner.side.opposite
        seen = set()
        for entry in self.ranked:
            if entry.side is not want:
                raise ValueError(f"entry on wrong side in preference of {self.owner}")
            if not entry:
                raise ValueError(f"empty set listed explicitly in preference of {self.owner}")
            if entry.mask in seen:
                raise ValueError(f"duplicate entry in preference of {self.owner}")
            seen.add(entry.mask)

    def rank_of(self, subset: PartnerSet) -> int | None:
        """Position of ``subset`` in the order; len(ranked) for the empty set,
        None for unlisted (unacceptable) sets."""
        if subset.side is not self.owner.side.opposite:
            raise ValueError("subset drawn from the wrong side")
        if not subset:
            return len(self.ranked)
        for pos, entry in enumerate(self.ranked):
            if entry.mask == subset.mask:
                return pos
        return None

    def is_acceptable(self, subset: PartnerSet) -> bool:
        return self.rank_of(subset) is not None


def choice_mask(offer_mask: int, pref: PreferenceRelation) -> int:
    """Low-level choice evaluator on raw bitmasks (no side checking)."""
    for entry in pref.ranked:
        if entry.mask & ~offer_mask == 0:
            return entry.mask
    return 0


def choice(offer: PartnerSet, pref: PreferenceRelation) -> PartnerSet:
    """The best subset of ``offer`` under ``pref``: the first ranked entry
    contained in the offer, or the empty set when none qualifies."""
    if offer.side is not pref.owner.side.opposite:
        raise ValueError(
            f"offer set is on side {offer.side.value!r} but {pref.owner} chooses "
            f"from side {pref.owner.side.opposite.value!r}"
        )
    return PartnerSet(offer.side, choice_mask(offer.mask, pref))


@dataclass(frozen=True)
class Profile:
    """One preference relation per agent, firms first then workers."""

    firm_prefs: tuple[PreferenceRelation, ...]
    worker_prefs: tuple[PreferenceRelation, ...]

    def __post_init__(self) -> None:
        if len(self.firm_prefs) > MAX_SIDE or len(self.worker_prefs) > MAX_SIDE:
            raise UnsupportedSizeError(f"at most {MAX_SIDE} agents per side")
        for side, prefs, opp_count in (
            (Side.FIRM, self.firm_prefs, len(self.worker_prefs)),
            (Side.WORKER, self.worker_prefs, len(self.firm_prefs)),
        ):
            for i, pref in enumerate(prefs):
                if pref.owner != AgentId(side, i):
                    raise ValueError(f"preference at {side.value} slot {i} owned by {pref.owner}")
                for entry in pref.ranked:
                    if entry.mask >> opp_count:
                        raise ValueError(f"preference of {pref.owner} references unknown partners")

    @property
    def num_firms(self) -> int:
        return len(self.firm_prefs)

    @property
    def num_workers(self) -> int:
        return len(self.worker_prefs)

    def side_count(self, side: Side) -> int:
        return self.num_firms if side is Side.FIRM else self.num_workers

    def agents(self) -> Iterator[AgentId]:
        for i in range(self.num_firms):
            yield AgentId(Side.FIRM, i)
        for j in range(self.num_workers):
            yield AgentId(Side.WORKER, j)

    def __getitem__(self, agent: AgentId) -> PreferenceRelation:
        prefs = self.firm_prefs if agent.side is Side.FIRM else self.worker_prefs
        return prefs[agent.index]


def replace_preference(profile: Profile, agent: AgentId, pref: PreferenceRelation) -> Profile:
    """A new profile identical to ``profile`` except at ``agent``."""
    if pref.owner != agent:
        raise ValueError(f"replacement preference owned by {pref.owner}, not {agent}")
    if agent.side is Side.FIRM:
        firm_prefs = tuple(
            pref if i == agent.index else old for i, old in enumerate(profile.firm_prefs)
        )
        return Profile(firm_prefs, profile.worker_prefs)
    worker_prefs = tuple(
        pref if j == agent.index else old for j, old in enumerate(profile.worker_prefs)
    )
    return Profile(profile.firm_prefs, worker_prefs)


@dataclass(frozen=True)
class Matching:
    """A set of (firm index, worker index) edges.

    Any edge subset is a matching in this model; per-agent views are derived,
    so the two views of an edge agree by construction.
    """

    edges: frozenset[tuple[int, int]]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Matching":
        return cls(frozenset((f, w) for f, w in pairs))

    @classmethod
    def from_views(cls, views: Iterable[tuple[AgentId, PartnerSet]]) -> "Matching":
        """Rebuild a matching from per-agent partner sets (either or both sides)."""
        edges = set()
        for agent, partners in views:
            if partners.side is not agent.side.opposite:
                raise ValueError(f"view of {agent} lists partners on the wrong side")
            for p in partners:
                edge = (agent.index, p) if agent.side is Side.FIRM else (p, agent.index)
                edges.add(edge)
        return cls(frozenset(edges))

    @classmethod
    def empty(cls) -> "Matching":
        return cls(frozenset())

    def edge_mask(self, num_workers: int) -> int:
        """Integer encoding of the edge set: bit f*num_workers + w per edge."""
        mask = 0
        for f, w in self.edges:
            mask |= 1 << (f * num_workers + w)
        return mask


def matched_set(mu: Matching, agent: AgentId) -> PartnerSet:
    """The partners of ``agent`` under ``mu``; empty for single agents."""
    mask = 0
    if agent.side is Side.FIRM:
        for f, w in mu.edges:
            if f == agent.index:
                mask |= 1 << w
    else:
        for f, w in mu.edges:
            if w == agent.index:
                mask |= 1 << f
    return PartnerSet(agent.side.opposite, mask)


@dataclass(frozen=True)
class MarketInstance:
    """Named agents plus their preference profile: the unit of parsing and solving."""

    firm_names: tuple[str, ...]
    worker_names: tuple[str, ...]
    profile: Profile

    def __post_init__(self) -> None:
        if len(set(self.firm_names)) != len(self.firm_names):
            raise ValueError("duplicate firm names")
        if len(set(self.worker_names)) != len(self.worker_names):
            raise ValueError("duplicate worker names")
        if len(self.firm_names) != self.profile.num_firms:
            raise ValueError("firm name count does not match profile")
        if len(self.worker_names) != self.profile.num_workers:
            raise ValueError("worker name count does not match profile")

    def agent_id(self, name: str) -> AgentId:
        if name in self.firm_names:
            return AgentId(Side.FIRM, self.firm_names.index(name))
        if name in self.worker_names:
            return AgentId(Side.WORKER, self.worker_names.index(name))
        raise KeyError(f"unknown agent name {name!r}")

    def name_of(self, agent: AgentId) -> str:
        names = self.firm_names if agent.side is Side.FIRM else self.worker_names
        return names[agent.index]

    def side_names(self, side: Side) -> tuple[str, ...]:
        return self.firm_names if side is Side.FIRM else self.worker_names
