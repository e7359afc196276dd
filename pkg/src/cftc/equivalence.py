"""Event-equivalence of messages and traces.

A relation is parameterized by a single event, by a clause, or by a
clause together with the CFT's output event. ``None`` stands for the
irrelevant-message marker on either side of :func:`msg_equiv`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .component import Message
from .formula import EventRef, Kind, NegClause


@dataclass(frozen=True)
class ByEvent:
    event: EventRef

    @property
    def events(self):
        return (self.event,)


@dataclass(frozen=True)
class ByClause:
    clause: NegClause

    @property
    def events(self):
        return self.clause.events


@dataclass(frozen=True)
class ByClauseAndEvent:
    clause: NegClause
    event: EventRef

    @property
    def events(self):
        return self.clause.events + (self.event,)

    @property
    def clause_only(self):
        return ByClause(self.clause)

    def __str__(self):
        return f"{self.clause} / {self.event}"


Relation = Union[ByEvent, ByClause, ByClauseAndEvent]


def _irrelevant_for(m: Message, e: EventRef) -> bool:
    return m.port != e.port


def _equiv_for(m1: Optional[Message], m2: Optional[Message], e: EventRef) -> bool:
    irr1 = m1 is None or _irrelevant_for(m1, e)
    irr2 = m2 is None or _irrelevant_for(m2, e)
    if irr1 and irr2:
        return True
    if irr1 or irr2:
        return False
    if e.kind is Kind.EXISTS:
        return True
    return m1.value == m2.value


def msg_irrelevant(m: Message, rel: Relation) -> bool:
    return all(_irrelevant_for(m, e) for e in rel.events)


def msg_equiv(m1: Optional[Message], m2: Optional[Message], rel: Relation) -> bool:
    return all(_equiv_for(m1, m2, e) for e in rel.events)


def filter_relevant(t, rel: Relation) -> tuple:
    return tuple(m for m in t if not msg_irrelevant(m, rel))


@lru_cache(maxsize=1 << 16)
def trace_equiv(t1: tuple, t2: tuple, rel: Relation) -> bool:
    """The recursive four-case relation, memoized over suffix positions."""
    t1, t2 = tuple(t1), tuple(t2)

    @lru_cache(maxsize=None)
    def eq(i, j):
        if i == len(t1) and j == len(t2):
            return True
        if i < len(t1) and msg_irrelevant(t1[i], rel) and eq(i + 1, j):
            return True
        if j < len(t2) and msg_irrelevant(t2[j], rel) and eq(i, j + 1):
            return True
        if i < len(t1) and j < len(t2) and msg_equiv(t1[i], t2[j], rel):
            return eq(i + 1, j + 1)
        return False

    return eq(0, 0)


# Abstractions used by the checker: a relevant message maps to the
# class of messages it is equivalent to.

@lru_cache(maxsize=None)
def value_tracked_ports(rel: Relation) -> frozenset:
    return frozenset(e.port for e in rel.events if e.kind is Kind.VALUE)


@lru_cache(maxsize=1 << 16)
def abstract(m: Message, rel: Relation):
    """Equivalence-class label of ``m`` under ``rel``, ``None`` if irrelevant."""
    if msg_irrelevant(m, rel):
        return None
    if m.port in value_tracked_ports(rel):
        return (m.port, m.value)
    return (m.port, None)


def signature(t, rel: Relation) -> tuple:
    """Abstract relevant subsequence; equal signatures iff equivalent traces."""
    return tuple(a for a in (abstract(m, rel) for m in t) if a is not None)
