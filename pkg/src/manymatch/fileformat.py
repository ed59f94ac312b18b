"""Plain-text market format, parser, serializer, and table rendering.

The format mirrors the list notation used throughout the package::

    # lines starting with '#' are comments
    firms: f1 f2 f3
    workers: w1 w2 w3 w4
    pref f1: w2 w3 | w1 | w3
    pref w1: f1 | f3 | f2
    ...

Each agent gets exactly one ``pref`` line; alternatives are separated by
``|`` and members inside an alternative by whitespace.  The empty set is
never written (an agent with no acceptable set gets an empty right-hand
side), alternatives must be distinct, and at most 32 agents per side are
allowed.
"""

from __future__ import annotations

from .core import (
    MarketInstance,
    MatchingError,
    Matching,
    PartnerSet,
    PreferenceRelation,
    Profile,
    Side,
    AgentId,
    MAX_SIDE,
    matched_set,
)

EMPTY_SET_TEXT = "∅"


class ParseError(MatchingError):
    """A market document failed to parse; carries the offending position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}: " if column is None else f"line {line}, column {column}: "
        super().__init__(where + message)


def _split_names(body: str) -> list[str]:
    return body.split()


def parse_market(text: str) -> MarketInstance:
    """Parse a market document into a validated MarketInstance."""
    firm_names: list[str] | None = None
    worker_names: list[str] | None = None
    pref_lines: list[tuple[int, str, str, str]] = []  # (lineno, raw, name, body)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("firms:"):
            if firm_names is not None:
                raise ParseError("duplicate 'firms:' line", lineno)
            firm_names = _split_names(line[len("firms:"):])
        elif line.startswith("workers:"):
            if worker_names is not None:
                raise ParseError("duplicate 'workers:' line", lineno)
            worker_names = _split_names(line[len("workers:"):])
        elif line.startswith("pref "):
            head, sep, body = line[len("pref "):].partition(":")
            if not sep:
                raise ParseError("expected ':' after the agent name in a pref line", lineno)
            name = head.strip()
            if not name or len(name.split()) != 1:
                raise ParseError("expected exactly one agent name in a pref line", lineno)
            pref_lines.append((lineno, raw, name, body))
        else:
            raise ParseError(f"unrecognized line {line.split()[0]!r}", lineno)

    if firm_names is None:
        raise ParseError("missing 'firms:' line")
    if worker_names is None:
        raise ParseError("missing 'workers:' line")
    if len(firm_names) > MAX_SIDE or len(worker_names) > MAX_SIDE:
        raise ParseError(f"at most {MAX_SIDE} agents per side are supported")
    if not firm_names or not worker_names:
        raise ParseError("each side needs at least one agent")
    for side_label, names in (("firm", firm_names), ("worker", worker_names)):
        seen = set()
        for name in names:
            if name in seen:
                raise ParseError(f"duplicate {side_label} name {name!r}")
            seen.add(name)
    overlap = set(firm_names) & set(worker_names)
    if overlap:
        raise ParseError(f"name {sorted(overlap)[0]!r} declared on both sides")

    firm_index = {name: i for i, name in enumerate(firm_names)}
    worker_index = {name: j for j, name in enumerate(worker_names)}

    relations: dict[AgentId, PreferenceRelation] = {}
    for lineno, raw, name, body in pref_lines:
        if name in firm_index:
            owner = AgentId(Side.FIRM, firm_index[name])
            members, member_side = worker_index, Side.WORKER
        elif name in worker_index:
            owner = AgentId(Side.WORKER, worker_index[name])
            members, member_side = firm_index, Side.FIRM
        else:
            raise ParseError(f"pref line for undeclared agent {name!r}", lineno,
                             column=raw.find(name) + 1)
        if owner in relations:
            raise ParseError(f"duplicate pref line for agent {name!r}", lineno)

        ranked: list[PartnerSet] = []
        seen_masks = set()
        body = body.strip()
        alternatives = body.split("|") if body else []
        for alt in alternatives:
            tokens = alt.split()
            if not tokens:
                raise ParseError(
                    f"empty alternative in the pref line of {name!r}; "
                    "the empty set is implicit and may not be written", lineno)
            mask = 0
            for token in tokens:
                if token not in members:
                    raise ParseError(
                        f"unknown {member_side.value} name {token!r} in the pref line of {name!r}",
                        lineno, column=raw.find(token) + 1)
                bit = 1 << members[token]
                if mask & bit:
                    raise ParseError(
                        f"member {token!r} repeated inside one alternative of {name!r}", lineno)
                mask |= bit
            if mask in seen_masks:
                raise ParseError(f"duplicate alternative in the pref line of {name!r}", lineno)
            seen_masks.add(mask)
            ranked.append(PartnerSet(member_side, mask))
        relations[owner] = PreferenceRelation(owner=owner, ranked=tuple(ranked))

    for side, names in ((Side.FIRM, firm_names), (Side.WORKER, worker_names)):
        for i, name in enumerate(names):
            if AgentId(side, i) not in relations:
                raise ParseError(f"missing pref line for agent {name!r}")

    profile = Profile(
        firm_prefs=tuple(relations[AgentId(Side.FIRM, i)] for i in range(len(firm_names))),
        worker_prefs=tuple(relations[AgentId(Side.WORKER, j)] for j in range(len(worker_names))),
    )
    return MarketInstance(
        firm_names=tuple(firm_names), worker_names=tuple(worker_names), profile=profile
    )


def format_partner_set(ps: PartnerSet, instance: MarketInstance) -> str:
    """Members of ``ps`` as names in index order, or the empty-set sign."""
    names = instance.side_names(ps.side)
    return " ".join(names[i] for i in ps) if ps else EMPTY_SET_TEXT


def format_relation(pref: PreferenceRelation, instance: MarketInstance) -> str:
    return " | ".join(format_partner_set(entry, instance) for entry in pref.ranked)


def serialize_market(instance: MarketInstance) -> str:
    """Canonical document: headers, then one pref line per agent in side and
    index order, members inside each alternative in index order."""
    lines = [
        "firms: " + " ".join(instance.firm_names),
        "workers: " + " ".join(instance.worker_names),
    ]
    for agent in instance.profile.agents():
        body = format_relation(instance.profile[agent], instance)
        name = instance.name_of(agent)
        lines.append(f"pref {name}: {body}" if body else f"pref {name}:")
    return "\n".join(lines) + "\n"


def render_matching(mu: Matching, instance: MarketInstance) -> str:
    """Two-row table: one column per firm, cells listing the firm's workers."""
    cells = []
    for f in range(len(instance.firm_names)):
        partners = matched_set(mu, AgentId(Side.FIRM, f))
        cells.append(format_partner_set(partners, instance))
    widths = [max(len(h), len(c)) for h, c in zip(instance.firm_names, cells)]
    header = "  ".join(h.ljust(w) for h, w in zip(instance.firm_names, widths)).rstrip()
    row = "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    return header + "\n" + row


def matching_to_dict(mu: Matching, instance: MarketInstance) -> dict[str, list[str]]:
    """JSON-friendly view: firm name -> worker names, [] for unmatched."""
    out: dict[str, list[str]] = {}
    for f, name in enumerate(instance.firm_names):
        partners = matched_set(mu, AgentId(Side.FIRM, f))
        out[name] = [instance.worker_names[w] for w in partners]
    return out
