"""Monotone propositional formulas over events and their negated DNF.

A CFT formula only ever contains positive literals. Negation is never a
node of the tree: the negated formula is represented by its disjunctive
normal form, a list of :class:`NegClause`, each one a conjunction of
negated events.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from ._lex import TokenStream
from .errors import FormulaError


class Kind(str, enum.Enum):
    EXISTS = "exists"
    VALUE = "value"

    def __str__(self):
        return self.value


@dataclass(frozen=True, order=True)
class EventRef:
    """A failure event on a port: ``EXISTS`` or ``VALUE``."""

    port: str
    kind: Kind

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))

    def __str__(self):
        return f"{self.port}.{self.kind.value}"

    @classmethod
    def parse(cls, text):
        port, _, kind = text.partition(".")
        if not port or kind not in ("exists", "value"):
            raise FormulaError(f"malformed event {text!r}")
        return cls(port, Kind(kind))


@dataclass(frozen=True)
class Lit:
    event: EventRef

    def __str__(self):
        return str(self.event)


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        _check_children(self)

    def __str__(self):
        return " & ".join(_wrap(c) for c in self.children)


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        _check_children(self)

    def __str__(self):
        return " | ".join(_wrap(c) for c in self.children)


Formula = Union[Lit, And, Or]


def _check_children(node):
    children = tuple(node.children)
    if len(children) < 2:
        raise FormulaError(f"{type(node).__name__} needs at least two children")
    for c in children:
        if not isinstance(c, (Lit, And, Or)):
            raise FormulaError(f"not a formula node: {c!r}")
    object.__setattr__(node, "children", children)


def _wrap(node):
    return str(node) if isinstance(node, Lit) else f"({node})"


def lit(port, kind="value"):
    return Lit(EventRef(port, Kind(kind)))


def conj(*parts):
    return And(tuple(parts))


def disj(*parts):
    return Or(tuple(parts))


@dataclass(frozen=True)
class NegClause:
    """Conjunction of the negations of ``events``; events are kept sorted."""

    events: tuple

    def __post_init__(self):
        events = tuple(sorted(set(self.events)))
        if not events:
            raise FormulaError("a clause needs at least one event")
        object.__setattr__(self, "events", events)

    @classmethod
    def of(cls, events: Iterable[EventRef]):
        return cls(tuple(events))

    @property
    def ports(self):
        return frozenset(e.port for e in self.events)

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def __str__(self):
        return "&".join(f"~{e}" for e in self.events)


def events(p: Formula) -> frozenset:
    if isinstance(p, Lit):
        return frozenset([p.event])
    return frozenset().union(*(events(c) for c in p.children))


def eval_formula(p: Formula, assignment: Mapping[EventRef, bool]) -> bool:
    if isinstance(p, Lit):
        try:
            return bool(assignment[p.event])
        except KeyError:
            raise FormulaError(f"unassigned event {p.event}") from None
    if isinstance(p, And):
        # evaluate every child so a missing entry is always reported
        return all([eval_formula(c, assignment) for c in p.children])
    return any([eval_formula(c, assignment) for c in p.children])


def assignments(evs):
    evs = sorted(evs)
    for bits in itertools.product((False, True), repeat=len(evs)):
        yield dict(zip(evs, bits))


def formulas_equiv(p: Formula, q: Formula) -> bool:
    universe = events(p) | events(q)
    return all(eval_formula(p, a) == eval_formula(q, a) for a in assignments(universe))


def canonical_clauses(clauses: Iterable[Iterable[EventRef]]) -> list:
    """Deduplicate, drop subsumed (superset) clauses, sort."""
    sets = {frozenset(c) for c in clauses}
    kept = [c for c in sets if not any(o < c for o in sets)]
    return sorted((NegClause.of(c) for c in kept), key=lambda c: c.events)


def _neg_dnf_sets(p):
    if isinstance(p, Lit):
        return [frozenset([p.event])]
    parts = [_neg_dnf_sets(c) for c in p.children]
    if isinstance(p, And):
        # ~(a & b) = ~a | ~b
        return [c for part in parts for c in part]
    # ~(a | b) = ~a & ~b, distributed
    out = [frozenset()]
    for part in parts:
        out = [acc | c for acc in out for c in part]
        out = [c for c in set(out) if not any(o < c for o in out)]
    return out


def neg_dnf(p: Formula) -> list:
    """Clauses ``~P1 .. ~Pn`` with ``~p == ~P1 | .. | ~Pn``, canonical order."""
    return canonical_clauses(_neg_dnf_sets(p))


def clauses_to_formula(clauses) -> Formula:
    """The positive formula whose negation is the disjunction of ``clauses``.

    ``~(~A & ~B) | ~(~C)`` re-negated is ``(A | B) & C``.
    """
    terms = []
    for c in clauses:
        lits = [Lit(e) for e in c.events]
        terms.append(lits[0] if len(lits) == 1 else Or(tuple(lits)))
    return terms[0] if len(terms) == 1 else And(tuple(terms))


def substitute(p: Formula, a: EventRef, q: Formula) -> Formula:
    if isinstance(p, Lit):
        return q if p.event == a else p
    return type(p)(tuple(substitute(c, a, q) for c in p.children))


def substitute_strict(p: Formula, a: EventRef, q: Formula) -> Formula:
    """Replace ``a`` so that it stays in the negated clauses next to ``q``.

    The replacement node is ``a | q``: its negation ``~a & ~q`` is the
    clause shape that keeps the connected event alongside the clauses of
    the substituted tree.
    """
    if isinstance(p, Lit):
        return Or((p, q)) if p.event == a else p
    return type(p)(tuple(substitute_strict(c, a, q) for c in p.children))


def parse_formula(text_or_stream) -> Formula:
    """Parse ``p.value | (r.exists & s.value)``; ``&`` binds tighter than ``|``."""
    ts = TokenStream.from_text(text_or_stream) if isinstance(text_or_stream, str) else text_or_stream
    standalone = isinstance(text_or_stream, str)
    node = _parse_or(ts)
    if standalone and ts.peek().kind != "eof":
        raise ts.error(f"unexpected {ts.peek().text!r} after formula")
    return node


def _parse_or(ts):
    parts = [_parse_and(ts)]
    while ts.accept("|"):
        parts.append(_parse_and(ts))
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def _parse_and(ts):
    parts = [_parse_atom(ts)]
    while ts.accept("&"):
        parts.append(_parse_atom(ts))
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def _parse_atom(ts):
    if ts.accept("("):
        node = _parse_or(ts)
        ts.expect(")")
        return node
    tok = ts.peek()
    if tok.kind != "ident":
        if tok.kind == "eof":
            raise ts.error("formula needs at least one literal")
        raise ts.error(f"expected event literal, found {tok.text!r}")
    port = ts.next().text
    ts.expect(".")
    kind = ts.ident("event kind")
    if kind.text not in ("exists", "value"):
        raise ts.error(f"unknown event kind {kind.text!r}", kind)
    return Lit(EventRef(port, Kind(kind.text)))
