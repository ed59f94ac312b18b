"""Many-to-many matching markets with choice functions.

Stability checking, brute-force stable-set enumeration, generalized deferred
acceptance, Blair-order comparisons, and a toolkit for analyzing strategic
misreporting under stable matching rules.
"""

from .axioms import (
    Axiom,
    AxiomReport,
    AxiomWitness,
    QuotaRanking,
    check_lad,
    check_substitutable,
    responsive_preference,
)
from .core import (
    AgentId,
    MarketInstance,
    Matching,
    MatchingError,
    MAX_SIDE,
    NoStableMatchingError,
    PartnerSet,
    PreconditionError,
    PreferenceRelation,
    Profile,
    Side,
    UnsupportedSizeError,
    choice,
    matched_set,
    replace_preference,
)
from .fileformat import (
    ParseError,
    parse_market,
    render_matching,
    serialize_market,
)
from .manipulation import (
    AxiomFlags,
    CounterexampleReport,
    GmtCheck,
    GmtVerification,
    ManipulationOutcome,
    Misreport,
    MisreportFinding,
    candidate_set_H,
    evaluate_misreport,
    gmt_counterexample_check,
    make_misreport,
    restrict_preference,
    truncation_strategy,
    verify_gmt,
)
from .solver import (
    OrderVerdict,
    StableRule,
    apply_rule,
    compare_blair,
    compare_common,
    deferred_acceptance,
    side_optimal,
)
from .stability import (
    BlockingPair,
    DEFAULT_MAX_EDGES,
    StableSet,
    blocking_pairs,
    check_same_partner_counts,
    check_underfilled_constancy,
    enumerate_stable,
    is_individually_rational,
    is_stable,
)

__all__ = [
    "AgentId",
    "Axiom",
    "AxiomFlags",
    "AxiomReport",
    "AxiomWitness",
    "BlockingPair",
    "CounterexampleReport",
    "DEFAULT_MAX_EDGES",
    "GmtCheck",
    "GmtVerification",
    "ManipulationOutcome",
    "MarketInstance",
    "Matching",
    "MatchingError",
    "MAX_SIDE",
    "Misreport",
    "MisreportFinding",
    "NoStableMatchingError",
    "OrderVerdict",
    "ParseError",
    "PartnerSet",
    "PreconditionError",
    "PreferenceRelation",
    "Profile",
    "QuotaRanking",
    "Side",
    "StableRule",
    "StableSet",
    "UnsupportedSizeError",
    "apply_rule",
    "blocking_pairs",
    "candidate_set_H",
    "check_lad",
    "check_same_partner_counts",
    "check_substitutable",
    "check_underfilled_constancy",
    "choice",
    "compare_blair",
    "compare_common",
    "deferred_acceptance",
    "enumerate_stable",
    "evaluate_misreport",
    "gmt_counterexample_check",
    "is_individually_rational",
    "is_stable",
    "make_misreport",
    "matched_set",
    "parse_market",
    "render_matching",
    "replace_preference",
    "responsive_preference",
    "restrict_preference",
    "serialize_market",
    "side_optimal",
    "truncation_strategy",
    "verify_gmt",
]
