"""Component fault trees and their (strict) composition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .component import IN, OUT, Component
from .errors import CompositionError
from .formula import EventRef, Formula, events, neg_dnf, substitute, substitute_strict


@dataclass(frozen=True)
class CFT:
    formula: Formula
    output_event: EventRef
    owner: str
    name: str = ""

    def __str__(self):
        return f"({self.formula}, {self.output_event})"


def cft_problems(cft: CFT, comp: Component) -> list:
    """Invariant violations of ``cft`` against its owner, as messages."""
    problems = []
    out_port = comp.port_map.get(cft.output_event.port)
    if out_port is None or out_port.direction is not OUT:
        problems.append(f"output event {cft.output_event} is not on an output port of {comp.name}")
    for e in sorted(events(cft.formula)):
        decl = comp.port_map.get(e.port)
        if decl is None:
            problems.append(f"event {e} is not on a port of {comp.name}")
        elif decl.direction is not IN and e.port not in comp.internal:
            problems.append(f"event {e} is not on an input port of {comp.name}")
    return problems


def clauses(cft: CFT) -> list:
    return neg_dnf(cft.formula)


def _prepare(cft_c: CFT, binding: Mapping[EventRef, CFT], connections, owner):
    for event, cft_d in binding.items():
        if cft_d.output_event != event:
            raise CompositionError(f"binding mismatch: {event} is bound to a CFT for {cft_d.output_event}")
    ports = set(connections) if connections is not None else {e.port for e in binding}
    unbound = sorted(e for e in events(cft_c.formula) if e.port in ports and e not in binding)
    if unbound:
        raise CompositionError(f"unbound connected event {unbound[0]}")
    stray = sorted(e for e in binding if e.port not in ports)
    if stray:
        raise CompositionError(f"binding for {stray[0]} is not on a connected port")
    if owner is None:
        d_owners = sorted({c.owner for c in binding.values()})
        owner = f"{cft_c.owner}||{d_owners[0]}" if len(d_owners) == 1 else cft_c.owner
    return sorted(binding.items()), owner


def compose(cft_c: CFT, binding: Mapping[EventRef, CFT], connections=None, owner=None, name="") -> CFT:
    """Replace every bound event of ``cft_c`` by the formula of its CFT."""
    items, owner = _prepare(cft_c, binding, connections, owner)
    formula = cft_c.formula
    for event, cft_d in items:
        formula = substitute(formula, event, cft_d.formula)
    return CFT(formula, cft_c.output_event, owner, name)


def compose_strict(cft_c: CFT, binding: Mapping[EventRef, CFT], connections=None, owner=None, name="") -> CFT:
    """Like :func:`compose` but the bound events stay in every clause."""
    items, owner = _prepare(cft_c, binding, connections, owner)
    formula = cft_c.formula
    for event, cft_d in items:
        formula = substitute_strict(formula, event, cft_d.formula)
    return CFT(formula, cft_c.output_event, owner, name)
