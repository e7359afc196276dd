"""Seeded random components, CFTs and two-component systems."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .cft import CFT
from .component import IN, OUT, Component, Message, PortDecl
from .errors import CFTError
from .formula import And, EventRef, Kind, Lit, Or, events


@dataclass(frozen=True)
class GenParams:
    max_states: int = 4
    ports: int = 3
    domain_size: int = 2
    inputs: Optional[tuple] = None
    outputs: Optional[tuple] = None

    def __post_init__(self):
        if self.max_states < 1 or self.ports < 0 or self.domain_size < 1:
            raise ValueError("generator parameters must be positive")


def _rng(seed):
    return random.Random(seed if isinstance(seed, (int, str)) else repr(seed))


def _port_names(rng, params):
    if params.inputs is not None or params.outputs is not None:
        return tuple(params.inputs or ()), tuple(params.outputs or ())
    n_in = rng.randint(1, params.ports - 1) if params.ports >= 2 else params.ports
    n_out = params.ports - n_in
    return tuple(f"i{k}" for k in range(n_in)), tuple(f"o{k}" for k in range(n_out))


def gen_component(seed, params: GenParams = GenParams(), name="gen") -> Component:
    """A random component that is deterministic by construction.

    Every state either reads a non-empty set of input ports (all values
    of each), emits exactly one output, or is a dead end.
    """
    rng = _rng(seed)
    ins, outs = _port_names(rng, params)
    domain = tuple(str(v) for v in range(params.domain_size))
    ports = tuple(PortDecl(p, IN, domain) for p in ins) + tuple(PortDecl(p, OUT, domain) for p in outs)
    n = rng.randint(1, params.max_states)
    states = [f"s{k}" for k in range(n)]
    transitions = []
    for s in states:
        roll = rng.random()
        if ins and (not outs or roll < 0.5):
            k = rng.randint(1, len(ins))
            for p in sorted(rng.sample(ins, k)):
                for v in domain:
                    transitions.append((s, Message(p, v, IN), rng.choice(states)))
        elif outs and roll < 0.92:
            transitions.append((s, Message(rng.choice(outs), rng.choice(domain), OUT), rng.choice(states)))
    return Component(name, ports, states[0], tuple(transitions), frozenset(states))


def _random_tree(rng, lits):
    if len(lits) == 1:
        return lits[0]
    cut = rng.randint(1, len(lits) - 1)
    left, right = _random_tree(rng, lits[:cut]), _random_tree(rng, lits[cut:])
    op = Or if rng.random() < 0.7 else And
    parts = []
    for child in (left, right):
        # flatten same-operator children so the tree stays normalized
        parts.extend(child.children if isinstance(child, op) else (child,))
    return op(tuple(parts))


def gen_cft(seed, comp: Component, output_event: EventRef = None, name="") -> CFT:
    """A random CFT over ``comp``'s input events with at most four literals."""
    rng = _rng(seed)
    ins = [p.name for p in comp.input_ports()]
    outs = [p.name for p in comp.output_ports()]
    if not ins or (output_event is None and not outs):
        raise CFTError(f"ungeneratable: {comp.name} needs input and output ports")
    kinds = (Kind.EXISTS, Kind.VALUE)
    lits = [Lit(EventRef(rng.choice(ins), rng.choice(kinds))) for _ in range(rng.randint(1, 4))]
    formula = _random_tree(rng, lits)
    if output_event is None:
        output_event = EventRef(rng.choice(outs), rng.choice(kinds))
    return CFT(formula, output_event, comp.name, name)


@dataclass(frozen=True)
class SystemSpec:
    c: Component
    d: Component
    connections: tuple
    cft_c: CFT
    cfts_d: tuple  # sorted (EventRef, CFT) pairs
    bounds: object = None
    name: str = ""

    @property
    def binding(self):
        return dict(self.cfts_d)


def gen_system(seed, params: GenParams = GenParams(), bounds=None) -> SystemSpec:
    """Consumer ``c`` reads connected port ``p`` from producer ``d``."""
    from .checker import Bounds

    rng = _rng(seed)
    extra = params.ports - 2
    c_in = ("p",) + (("a",) if extra > 0 and rng.random() < 0.5 else ())
    c_out = ("q",) + (("r",) if len(c_in) + 1 < params.ports and rng.random() < 0.3 else ())
    d_in = ("x",) + (("y",) if extra > 0 and rng.random() < 0.4 else ())
    d_out = ("p",) + (("z",) if len(d_in) + 1 < params.ports and rng.random() < 0.3 else ())
    c = gen_component((seed, "c"), GenParams(params.max_states, params.ports, params.domain_size, c_in, c_out), "c")
    d = gen_component((seed, "d"), GenParams(params.max_states, params.ports, params.domain_size, d_in, d_out), "d")
    cft_c = gen_cft((seed, "cft_c"), c, EventRef("q", rng.choice((Kind.EXISTS, Kind.VALUE))), "cft_c")
    cfts_d = []
    for e in sorted(events(cft_c.formula)):
        if e.port == "p":
            cfts_d.append((e, gen_cft((seed, "cft_d", str(e)), d, e, f"cft_d_{e.port}_{e.kind.value}")))
    return SystemSpec(c, d, ("p",), cft_c, tuple(cfts_d), bounds or Bounds(), f"random-{seed}")
