"""Finite input/output labeled transition systems.

Components own typed ports with finite value domains. Messages are
directed ``(port, value)`` pairs, traces are tuples of messages. A
component may be non-deterministic (composites often are); every
acceptance check works on the set of states reachable by a trace.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, NamedTuple

from .errors import ComponentError


class Direction(str, enum.Enum):
    IN = "?"
    OUT = "!"


IN = Direction.IN
OUT = Direction.OUT


def value_key(v):
    """Numeric values sort numerically, everything else after, by text."""
    s = str(v)
    return (0, int(s), "") if s.lstrip("-").isdigit() else (1, 0, s)


@dataclass(frozen=True)
class Message:
    port: str
    value: str
    direction: Direction

    def __post_init__(self):
        object.__setattr__(self, "value", str(self.value))
        object.__setattr__(self, "direction", Direction(self.direction))

    @property
    def is_input(self):
        return self.direction is IN

    def sort_key(self):
        return (self.port, self.direction.value, value_key(self.value))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return f"{self.port}{self.direction.value}{self.value}"

    @classmethod
    def parse(cls, text):
        for sym in "?!":
            if sym in text:
                port, _, value = text.partition(sym)
                return cls(port, value, Direction(sym))
        raise ComponentError(f"malformed message {text!r}")


def inp(port, value):
    return Message(port, str(value), IN)


def out(port, value):
    return Message(port, str(value), OUT)


def format_trace(t):
    return ".".join(str(m) for m in t) if t else "ε"


def parse_trace(text):
    text = text.strip()
    if text in ("", "ε"):
        return ()
    return tuple(Message.parse(part) for part in text.split("."))


def trace_key(t):
    """Canonical trace order: shorter first, then message-wise."""
    return (len(t), tuple(m.sort_key() for m in t))


@dataclass(frozen=True)
class PortDecl:
    name: str
    direction: Direction
    domain: tuple

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        domain = tuple(str(v) for v in self.domain)
        if not domain:
            raise ComponentError(f"port {self.name} has an empty domain")
        if len(set(domain)) != len(domain):
            raise ComponentError(f"port {self.name} repeats a domain value")
        object.__setattr__(self, "domain", domain)

    def messages(self):
        return [Message(self.name, v, self.direction) for v in self.domain]


class Transition(NamedTuple):
    source: Hashable
    message: Message
    target: Hashable


class Violation(NamedTuple):
    state: Hashable
    condition: int
    detail: str

    def __str__(self):
        return f"cond-{self.condition} at {self.state}: {self.detail}"


@dataclass(frozen=True)
class Component:
    name: str
    ports: tuple
    initial: Hashable
    transitions: tuple
    states: frozenset = None
    # connected ports of a composite, re-declared as outputs
    internal: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        ports = tuple(self.ports)
        names = [p.name for p in ports]
        if len(set(names)) != len(names):
            raise ComponentError(f"component {self.name}: duplicate port names")
        transitions = tuple(sorted(
            {Transition(*t) for t in self.transitions},
            key=lambda t: (str(t.source), t.message.sort_key(), str(t.target)),
        ))
        states = set(self.states or ())
        states.add(self.initial)
        for t in transitions:
            states.update((t.source, t.target))
        object.__setattr__(self, "ports", ports)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "states", frozenset(states))
        object.__setattr__(self, "internal", frozenset(self.internal))
        by_name = {p.name: p for p in ports}
        for t in transitions:
            decl = by_name.get(t.message.port)
            if decl is None:
                raise ComponentError(f"component {self.name}: transition on undeclared port {t.message.port}")
            if decl.direction is not t.message.direction:
                raise ComponentError(f"component {self.name}: {t.message} has the wrong direction")
            if t.message.value not in decl.domain:
                raise ComponentError(f"component {self.name}: {t.message} outside the domain of {decl.name}")

    @cached_property
    def port_map(self):
        return {p.name: p for p in self.ports}

    @cached_property
    def _succ(self):
        table = {}
        for s, m, s2 in self.transitions:
            table.setdefault(s, {}).setdefault(m, set()).add(s2)
        return {s: {m: frozenset(ts) for m, ts in row.items()} for s, row in table.items()}

    def port(self, name):
        try:
            return self.port_map[name]
        except KeyError:
            raise ComponentError(f"component {self.name} has no port {name}") from None

    def input_ports(self):
        return [p for p in self.ports if p.direction is IN]

    def output_ports(self):
        return [p for p in self.ports if p.direction is OUT]

    def alphabet(self):
        return sorted(m for p in self.ports for m in p.messages())

    def inputs(self):
        return sorted(m for p in self.input_ports() for m in p.messages())

    def enabled(self, state):
        """Messages enabled at ``state`` mapped to their successor sets."""
        return self._succ.get(state, {})

    def post(self, states, m):
        out = set()
        for s in states:
            out.update(self._succ.get(s, {}).get(m, ()))
        return frozenset(out)

    def sorted_states(self):
        return sorted(self.states, key=str)


def successors(comp: Component, state, m: Message) -> frozenset:
    return comp.enabled(state).get(m, frozenset())


def step(comp: Component, state, m: Message):
    """Unique successor of ``state`` on ``m`` or ``None``."""
    targets = successors(comp, state, m)
    if len(targets) > 1:
        raise ComponentError(f"component {comp.name}: {m} at {state} has {len(targets)} successors")
    return next(iter(targets), None)


def run(comp: Component, t, start=None) -> frozenset:
    """States reachable from ``start`` (default: initial) by trace ``t``."""
    states = frozenset([comp.initial if start is None else start])
    for m in t:
        states = comp.post(states, m)
        if not states:
            break
    return states


def accepts_trace(comp: Component, t) -> bool:
    return bool(run(comp, t))


def traces_up_to(comp: Component, depth: int) -> list:
    """Every accepted trace of length <= depth, in canonical order."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    found = [()]
    frontier = [((), frozenset([comp.initial]))]
    for _ in range(depth):
        nxt = []
        for t, states in frontier:
            msgs = sorted({m for s in states for m in comp.enabled(s)})
            for m in msgs:
                nxt.append((t + (m,), comp.post(states, m)))
        found.extend(t for t, _ in nxt)
        frontier = nxt
    return sorted(found, key=trace_key)


def reachable_states(comp: Component) -> list:
    seen = {comp.initial}
    stack = [comp.initial]
    while stack:
        s = stack.pop()
        for targets in comp.enabled(s).values():
            for s2 in targets:
                if s2 not in seen:
                    seen.add(s2)
                    stack.append(s2)
    return sorted(seen, key=str)


def validate_deterministic(comp: Component) -> list:
    """Violations of the three determinism conditions at reachable states."""
    violations = []
    for s in reachable_states(comp):
        enabled = comp.enabled(s)
        ports_in = {m.port for m in enabled if m.is_input}
        for port in sorted(ports_in):
            missing = [v for v in comp.port(port).domain if Message(port, v, IN) not in enabled]
            if missing:
                violations.append(Violation(s, 1, f"{port}? not enabled for {','.join(missing)}"))
        if len(enabled) > 1 and any(not m.is_input for m in enabled):
            shown = ",".join(str(m) for m in sorted(enabled))
            violations.append(Violation(s, 2, f"several messages with an output enabled: {shown}"))
        for m in sorted(enabled):
            if len(enabled[m]) > 1:
                violations.append(Violation(s, 3, f"{m} has {len(enabled[m])} successors"))
    return violations


def compose_components(c: Component, d: Component, connections, name=None) -> Component:
    """Synchronous product; ``d``'s outputs on ``connections`` feed ``c``'s inputs.

    A connected handshake shows up in composite traces as one output
    message ``p!v``. When the receiver cannot take the value the sender
    is blocked.
    """
    connections = tuple(sorted(set(connections)))
    for p in connections:
        pc, pd = c.port_map.get(p), d.port_map.get(p)
        if pc is None or pd is None or pc.direction is not IN or pd.direction is not OUT:
            raise ComponentError(f"connection mismatch on {p}: need {c.name}.{p} input and {d.name}.{p} output")
        if pc.domain != pd.domain:
            raise ComponentError(f"connection mismatch on {p}: domains differ")
    conn = set(connections)
    ports = []
    seen = set()
    for decl in list(c.ports) + list(d.ports):
        if decl.name in conn:
            if decl.name not in seen:
                ports.append(PortDecl(decl.name, OUT, decl.domain))
                seen.add(decl.name)
            continue
        if decl.name in seen:
            raise ComponentError(f"port clash: {decl.name} is declared by both {c.name} and {d.name}")
        seen.add(decl.name)
        ports.append(decl)

    start = (c.initial, d.initial)
    transitions = []
    seen_states = {start}
    stack = [start]
    while stack:
        sc, sd = stack.pop()
        moves = []
        for m, targets in c.enabled(sc).items():
            if m.port in conn:
                continue
            moves.extend((m, (t, sd)) for t in targets)
        for m, targets in d.enabled(sd).items():
            if m.port in conn:
                m_in = Message(m.port, m.value, IN)
                moves.extend((m, (tc, td)) for td in targets for tc in c.enabled(sc).get(m_in, ()))
            else:
                moves.extend((m, (sc, t)) for t in targets)
        for m, target in moves:
            transitions.append(((sc, sd), m, target))
            if target not in seen_states:
                seen_states.add(target)
                stack.append(target)
    return Component(
        name or f"{c.name}||{d.name}",
        tuple(ports),
        start,
        tuple(transitions),
        frozenset(seen_states),
        internal=frozenset(conn) | c.internal | d.internal,
    )
