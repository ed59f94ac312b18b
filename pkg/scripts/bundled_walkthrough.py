"""Walk through the three bundled markets and print their stories.

Shows each market's preferences, its side-optimal stable matchings, and what
happens when agents misreport: the demo market rewards a worker's truncation
(with an outcome that is not even stable under the truth), while the two
immune markets show every attempted manipulation failing once the law of
aggregate demand is dropped.

Usage: python scripts/bundled_walkthrough.py
"""

from __future__ import annotations

from manymatch import (
    Side,
    StableRule,
    apply_rule,
    blocking_pairs,
    deferred_acceptance,
    evaluate_misreport,
    gmt_counterexample_check,
    make_misreport,
    truncation_strategy,
)
from manymatch.core import PartnerSet, PreferenceRelation
from manymatch.fileformat import format_relation, render_matching, serialize_market
from manymatch.markets import firms_immune, manipulation_demo, workers_immune


def heading(text: str) -> None:
    print()
    print(text)
    print("-" * len(text))


def show_market(inst) -> None:
    print(serialize_market(inst), end="")
    print()
    print("firm-optimal stable matching:")
    print(render_matching(deferred_acceptance(inst.profile, Side.FIRM), inst))
    print("worker-optimal stable matching:")
    print(render_matching(deferred_acceptance(inst.profile, Side.WORKER), inst))


def main() -> None:
    heading("manipulation-demo: a profitable misreport with an unstable outcome")
    inst = manipulation_demo()
    p = inst.profile
    show_market(inst)

    w1 = inst.agent_id("w1")
    only_f3 = PreferenceRelation(owner=w1, ranked=(PartnerSet.of(Side.FIRM, 2),))
    outcome = evaluate_misreport(w1, make_misreport(w1, only_f3), StableRule.FIRM_OPTIMAL, p)
    print()
    print("w1 reports only f3 under the firm-optimal rule:")
    print(render_matching(outcome.manipulated, inst))
    print(f"w1's verdict vs. telling the truth: {outcome.verdict_common.value}")
    pairs = blocking_pairs(outcome.manipulated, p)
    rendered = ", ".join(f"({inst.name_of(b.firm)}, {inst.name_of(b.worker)})" for b in pairs)
    print(f"stable under the true profile: no (blocking pairs: {rendered})")

    heading("firms-immune: no truncation helps any firm (aggregate demand fails)")
    inst = firms_immune()
    p = inst.profile
    show_market(inst)
    mu_f = apply_rule(StableRule.FIRM_OPTIMAL, p)
    for name in ("f1", "f2", "f3"):
        agent = inst.agent_id(name)
        misreport = truncation_strategy(agent, mu_f, p)
        outcome = evaluate_misreport(agent, misreport, StableRule.WORKER_OPTIMAL, p)
        reported = format_relation(misreport.reported, inst) or "(empty list)"
        print(f"\n{name} truncates to {reported!r} under the worker-optimal rule:")
        print(render_matching(outcome.manipulated, inst))
        print(f"{name}'s verdict: {outcome.verdict_common.value}")

    heading("workers-immune: exhaustive search finds no profitable misreport")
    inst = workers_immune()
    p = inst.profile
    show_market(inst)
    print()
    for name in ("w1", "w2", "w3", "w4"):
        report = gmt_counterexample_check(
            p, StableRule.FIRM_OPTIMAL, inst.agent_id(name), exhaustive=True)
        print(f"{name}: {report.candidates_total} candidate reports, "
              f"{len(report.profitable)} profitable")


if __name__ == "__main__":
    main()
