"""Strategic misreporting machinery: preference restriction, truncation
targets, misreport evaluation, the manipulability-construction verifier, and
an exhaustive counterexample search for markets where the construction fails.

The central construction: when a rule assigns an agent less than its
side-optimal stable assignment, the agent reports its true relation
restricted to the assignment of a Blair-better stable matching.  That target
stays stable under the misreport, the rule must hand the agent exactly the
target assignment, and the agent strictly gains in both the Blair and the
listed order.  This chain needs both substitutability and the law of
aggregate demand; the bundled markets show it breaking without the latter.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .axioms import check_lad, check_substitutable
from .core import (
    AgentId,
    Matching,
    NoStableMatchingError,
    PartnerSet,
    PreconditionError,
    PreferenceRelation,
    Profile,
    UnsupportedSizeError,
    choice,
    matched_set,
    replace_preference,
)
from .solver import OrderVerdict, StableRule, apply_rule, compare_blair, compare_common, side_optimal
from .stability import DEFAULT_MAX_EDGES, StableSet, enumerate_stable, is_stable

EXHAUSTIVE_OPPOSITE_CAP = 3


@dataclass(frozen=True)
class AxiomFlags:
    substitutable: bool
    lad: bool


@dataclass(frozen=True)
class Misreport:
    """A reported relation for one agent, tagged with the axioms it satisfies."""

    agent: AgentId
    reported: PreferenceRelation
    axiom_flags: AxiomFlags


def make_misreport(agent: AgentId, reported: PreferenceRelation) -> Misreport:
    if reported.owner != agent:
        raise ValueError(f"reported relation owned by {reported.owner}, not {agent}")
    flags = AxiomFlags(
        substitutable=check_substitutable(reported).holds,
        lad=check_lad(reported).holds,
    )
    return Misreport(agent=agent, reported=reported, axiom_flags=flags)


@dataclass(frozen=True)
class ManipulationOutcome:
    """Rule output under truth vs. under one misreport, judged at the agent
    under its TRUE relation.  ``failure`` is set when the rule could not
    produce a matching from the reported profile; the other result fields are
    then None."""

    baseline: Matching
    manipulated: Matching | None
    verdict_common: OrderVerdict | None
    verdict_blair: OrderVerdict | None
    manipulated_stable_under_truth: bool | None
    failure: str | None = None

    @property
    def profitable(self) -> bool:
        return self.verdict_common is OrderVerdict.BETTER_STRICT


def restrict_preference(
    pref: PreferenceRelation, t: PartnerSet, p_check: bool = True
) -> PreferenceRelation:
    """The relation declaring unacceptable every set not contained in ``t``,
    preserving acceptability and order inside ``t``.

    With ``p_check`` on, ``t`` must be a fixed point of the agent's choice
    (the standing condition under which restriction is used as a strategy).
    """
    if t.side is not pref.owner.side.opposite:
        raise ValueError("restriction target drawn from the wrong side")
    if p_check and choice(t, pref) != t:
        raise PreconditionError(
            f"restriction target is not a choice fixed point for {pref.owner}"
        )
    kept = tuple(entry for entry in pref.ranked if entry.issubset(t))
    return PreferenceRelation(owner=pref.owner, ranked=kept)


def candidate_set_H(
    a: AgentId, rule: StableRule, p: Profile, max_edges: int = DEFAULT_MAX_EDGES
) -> StableSet:
    """The stable matchings Blair-strictly better for ``a`` than the rule's
    output: the targets a restriction strategy can secure."""
    ss = enumerate_stable(p, max_edges)
    if not len(ss):
        raise ValueError("stable set is empty")
    baseline = apply_rule(rule, p, max_edges)
    members = tuple(
        mu for mu in ss if compare_blair(mu, baseline, a, p) is OrderVerdict.BETTER_STRICT
    )
    return StableSet(members)


def truncation_strategy(a: AgentId, mu: Matching, p: Profile) -> Misreport:
    """The misreport that keeps only sets inside the agent's assignment under
    the (stable) target matching ``mu``."""
    if not is_stable(mu, p):
        raise PreconditionError(f"truncation target is not stable for {a}")
    reported = restrict_preference(p[a], matched_set(mu, a), p_check=True)
    return make_misreport(a, reported)


def evaluate_misreport(
    a: AgentId,
    m: Misreport,
    rule: StableRule,
    p_true: Profile,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> ManipulationOutcome:
    """Apply the rule to the swapped profile and judge the result at ``a``
    under the true relation, flagging whether the manipulated matching is
    even stable under the truth (it need not be)."""
    baseline = apply_rule(rule, p_true, max_edges)
    swapped = replace_preference(p_true, a, m.reported)
    try:
        manipulated = apply_rule(rule, swapped, max_edges)
    except (PreconditionError, NoStableMatchingError) as exc:
        return ManipulationOutcome(
            baseline=baseline,
            manipulated=None,
            verdict_common=None,
            verdict_blair=None,
            manipulated_stable_under_truth=None,
            failure=str(exc),
        )
    return ManipulationOutcome(
        baseline=baseline,
        manipulated=manipulated,
        verdict_common=compare_common(manipulated, baseline, a, p_true),
        verdict_blair=compare_blair(manipulated, baseline, a, p_true),
        manipulated_stable_under_truth=is_stable(manipulated, p_true),
    )


@dataclass(frozen=True)
class GmtCheck:
    """The four assertions of the manipulability construction for one target."""

    target: Matching
    misreport: Misreport
    outcome: ManipulationOutcome
    target_stable_under_report: bool
    rule_matches_target: bool
    blair_improves: bool
    common_improves: bool

    @property
    def assertions(self) -> tuple[bool, bool, bool, bool]:
        return (
            self.target_stable_under_report,
            self.rule_matches_target,
            self.blair_improves,
            self.common_improves,
        )

    @property
    def all_hold(self) -> bool:
        return all(self.assertions)


@dataclass(frozen=True)
class GmtVerification:
    agent: AgentId
    rule: StableRule
    applicable: bool
    baseline: Matching
    side_optimum: Matching | None
    checks: tuple[GmtCheck, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.all_hold for c in self.checks)


def verify_gmt(
    a: AgentId,
    rule: StableRule,
    p: Profile,
    *,
    all_candidates: bool = False,
    require_axioms: bool = True,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> GmtVerification:
    """Run the manipulability construction for one agent and record whether
    each of its four assertions holds.

    Not applicable when the rule already gives the agent its side-optimal
    assignment.  By default the construction targets the side-optimum; with
    ``all_candidates`` it sweeps every Blair-better stable matching.  The
    axiom precondition can be disabled to watch the construction fail on
    profiles outside its domain.
    """
    if require_axioms:
        for agent in p.agents():
            if not check_substitutable(p[agent]).holds:
                raise PreconditionError(f"{agent} fails substitutability")
            if not check_lad(p[agent]).holds:
                raise PreconditionError(f"{agent} fails the law of aggregate demand")

    baseline = apply_rule(rule, p, max_edges)
    ss = enumerate_stable(p, max_edges)
    optimum = side_optimal(ss, p, a.side)

    if optimum is not None and matched_set(baseline, a) == matched_set(optimum, a):
        return GmtVerification(
            agent=a, rule=rule, applicable=False, baseline=baseline,
            side_optimum=optimum, checks=(),
        )

    if all_candidates or optimum is None:
        targets = tuple(candidate_set_H(a, rule, p, max_edges))
    else:
        targets = (optimum,)

    checks = []
    for target in targets:
        misreport = truncation_strategy(a, target, p)
        outcome = evaluate_misreport(a, misreport, rule, p, max_edges)
        swapped = replace_preference(p, a, misreport.reported)
        rule_matches = (
            outcome.manipulated is not None
            and matched_set(outcome.manipulated, a) == matched_set(target, a)
        )
        checks.append(
            GmtCheck(
                target=target,
                misreport=misreport,
                outcome=outcome,
                target_stable_under_report=is_stable(target, swapped),
                rule_matches_target=rule_matches,
                blair_improves=outcome.verdict_blair is OrderVerdict.BETTER_STRICT,
                common_improves=outcome.verdict_common is OrderVerdict.BETTER_STRICT,
            )
        )
    return GmtVerification(
        agent=a, rule=rule, applicable=True, baseline=baseline,
        side_optimum=optimum, checks=tuple(checks),
    )


@dataclass(frozen=True)
class MisreportFinding:
    misreport: Misreport
    outcome: ManipulationOutcome


@dataclass(frozen=True)
class CounterexampleReport:
    """Result of searching one agent's misreports for a profitable one."""

    agent: AgentId
    rule: StableRule
    mode: str
    not_applicable: bool
    baseline: Matching | None
    candidates_total: int
    evaluated: int
    rule_failures: int
    profitable: tuple[MisreportFinding, ...]
    search_scope: str

    @property
    def found_profitable(self) -> bool:
        return bool(self.profitable)


def _all_relations(owner: AgentId, opposite_count: int) -> list[PreferenceRelation]:
    """Every strict list of distinct nonempty subsets of the opposite side."""
    side = owner.side.opposite
    pool = []
    for size in range(1, opposite_count + 1):
        for members in combinations(range(opposite_count), size):
            pool.append(PartnerSet.of(side, *members))
    relations = []
    for length in range(len(pool) + 1):
        for ranked in permutations(pool, length):
            relations.append(PreferenceRelation(owner=owner, ranked=ranked))
    return relations


def _sublist_relations(pref: PreferenceRelation) -> list[PreferenceRelation]:
    """Every order-preserving deletion of entries from the true list."""
    entries = pref.ranked
    relations = []
    for keep in range(1 << len(entries)):
        ranked = tuple(entries[i] for i in range(len(entries)) if keep >> i & 1)
        relations.append(PreferenceRelation(owner=pref.owner, ranked=ranked))
    return relations


def gmt_counterexample_check(
    p: Profile,
    rule: StableRule,
    a: AgentId,
    exhaustive: bool = False,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> CounterexampleReport:
    """Search ``a``'s misreports for one that strictly improves its outcome.

    Exhaustive mode enumerates every strict preference list over the opposite
    side (only feasible for opposite sides of at most three agents); otherwise
    the search covers the sublists of the true list, and the report says so.
    Candidates the rule cannot process (a no-longer-substitutable report fed
    to deferred acceptance, or a reported profile with no stable matching)
    count as rule failures, never as profitable.
    """
    opposite_count = p.side_count(a.side.opposite)
    baseline = apply_rule(rule, p, max_edges)
    ss = enumerate_stable(p, max_edges)
    optimum = side_optimal(ss, p, a.side)

    if optimum is not None and matched_set(baseline, a) == matched_set(optimum, a):
        return CounterexampleReport(
            agent=a, rule=rule, mode="exhaustive" if exhaustive else "sublists",
            not_applicable=True, baseline=baseline, candidates_total=0,
            evaluated=0, rule_failures=0, profitable=(),
            search_scope="agent already receives its side-optimal assignment",
        )

    if exhaustive:
        if opposite_count > EXHAUSTIVE_OPPOSITE_CAP:
            raise UnsupportedSizeError(
                f"exhaustive misreport search supports opposite sides of at most "
                f"{EXHAUSTIVE_OPPOSITE_CAP} agents, got {opposite_count}"
            )
        candidates = _all_relations(a, opposite_count)
        mode = "exhaustive"
        scope = "all strict preference lists over the opposite side"
    else:
        candidates = _sublist_relations(p[a])
        mode = "sublists"
        scope = (
            "order-preserving sublists of the true list only; "
            "relations outside the true list were not searched"
        )

    evaluated = 0
    rule_failures = 0
    profitable = []
    for reported in candidates:
        misreport = make_misreport(a, reported)
        outcome = evaluate_misreport(a, misreport, rule, p, max_edges)
        if outcome.failure is not None:
            rule_failures += 1
            continue
        evaluated += 1
        if outcome.profitable:
            profitable.append(MisreportFinding(misreport=misreport, outcome=outcome))

    return CounterexampleReport(
        agent=a, rule=rule, mode=mode, not_applicable=False, baseline=baseline,
        candidates_total=len(candidates), evaluated=evaluated,
        rule_failures=rule_failures, profitable=tuple(profitable), search_scope=scope,
    )
