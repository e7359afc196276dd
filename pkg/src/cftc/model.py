"""Reader and writer for the line-oriented model file format.

    component echo { in p : {0,1} ; out q : {0,1} ; init s0 ;
                     s0 -- p?0 --> s_0 ; s_0 -- q!0 --> s0 ; ... }
    cft echo_q on echo { output q.value ; formula p.value ; }
    system sys { use echo emitter ; connect emitter.p -> echo.p ;
                 bind p.value := emit_p ; check echo_q ; }

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re

from dataclasses import dataclass, field

from ._lex import TokenStream
from .cft import CFT, cft_problems
from .component import IN, OUT, Component, Message, PortDecl
from .errors import ComponentError, ParseError
from .formula import EventRef, Kind, parse_formula


@dataclass(frozen=True)
class System:
    name: str
    c: str
    d: str
    connections: tuple = ()
    bindings: tuple = ()  # (EventRef, cft name) pairs
    check: str = ""


@dataclass
class Model:
    components: dict = field(default_factory=dict)
    cfts: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)

    def component(self, name):
        try:
            return self.components[name]
        except KeyError:
            raise ParseError(f"unknown component {name!r}") from None

    def cft(self, name):
        try:
            return self.cfts[name]
        except KeyError:
            raise ParseError(f"unknown cft {name!r}") from None

    def system(self, name):
        try:
            return self.systems[name]
        except KeyError:
            raise ParseError(f"unknown system {name!r}") from None


def parse_model(text: str) -> Model:
    ts = TokenStream.from_text(text)
    model = Model()
    while ts.peek().kind != "eof":
        kw = ts.ident("'component', 'cft' or 'system'")
        if kw.text == "component":
            _parse_component(ts, model)
        elif kw.text == "cft":
            _parse_cft(ts, model)
        elif kw.text == "system":
            _parse_system(ts, model)
        else:
            raise ParseError(f"unexpected {kw.text!r}", kw.line, kw.col)
    return model


def _claim(names, tok, what):
    if tok.text in names:
        raise ParseError(f"duplicate {what} name {tok.text!r}", tok.line, tok.col)


def _parse_component(ts, model):
    name = ts.ident("component name")
    _claim(model.components, name, "component")
    ts.expect("{")
    ports, transitions, init = [], [], None
    while not ts.accept("}"):
        tok = ts.ident("port declaration, 'init' or transition")
        if ts.at("--"):
            ts.next()
            port_tok = ts.ident("port")
            sym = ts.next()
            if sym.text not in ("?", "!"):
                raise ParseError(f"expected '?' or '!', found {sym.text!r}", sym.line, sym.col)
            value_tok = ts.ident("value")
            ts.expect("-->")
            target = ts.ident("state")
            decl = next((p for p in ports if p.name == port_tok.text), None)
            if decl is None:
                raise ParseError(f"unknown port {port_tok.text!r}", port_tok.line, port_tok.col)
            if decl.direction.value != sym.text:
                raise ParseError(f"port {decl.name} is not an {'input' if sym.text == '?' else 'output'} port",
                                 sym.line, sym.col)
            if value_tok.text not in decl.domain:
                raise ParseError(f"domain mismatch: {value_tok.text} is not a value of {decl.name}",
                                 value_tok.line, value_tok.col)
            transitions.append((tok.text, Message(decl.name, value_tok.text, decl.direction), target.text))
        elif tok.text in ("in", "out"):
            pname = ts.ident("port name")
            if any(p.name == pname.text for p in ports):
                raise ParseError(f"duplicate port name {pname.text!r}", pname.line, pname.col)
            ts.expect(":")
            ts.expect("{")
            values = [ts.ident("value").text]
            while ts.accept(","):
                values.append(ts.ident("value").text)
            ts.expect("}")
            if len(set(values)) != len(values):
                raise ParseError(f"port {pname.text} repeats a value", pname.line, pname.col)
            ports.append(PortDecl(pname.text, IN if tok.text == "in" else OUT, tuple(values)))
        elif tok.text == "init":
            if init is not None:
                raise ParseError("duplicate init", tok.line, tok.col)
            init = ts.ident("state").text
        else:
            raise ParseError(f"unexpected {tok.text!r} in component", tok.line, tok.col)
        ts.expect(";")
    if init is None:
        raise ParseError(f"component {name.text} has no init state", name.line, name.col)
    try:
        model.components[name.text] = Component(name.text, tuple(ports), init, tuple(transitions))
    except ComponentError as exc:
        raise ParseError(str(exc), name.line, name.col) from None


def _parse_event(ts):
    port = ts.ident("port")
    ts.expect(".")
    kind = ts.ident("event kind")
    if kind.text not in ("exists", "value"):
        raise ParseError(f"unknown event kind {kind.text!r}", kind.line, kind.col)
    return EventRef(port.text, Kind(kind.text)), port


def _parse_cft(ts, model):
    name = ts.ident("cft name")
    _claim(model.cfts, name, "cft")
    ts.expect("on")
    owner = ts.ident("component name")
    comp = model.components.get(owner.text)
    if comp is None:
        raise ParseError(f"unknown component {owner.text!r}", owner.line, owner.col)
    ts.expect("{")
    output = formula = None
    while not ts.accept("}"):
        tok = ts.ident("'output' or 'formula'")
        if tok.text == "output":
            output, _ = _parse_event(ts)
        elif tok.text == "formula":
            formula = parse_formula(ts)
        else:
            raise ParseError(f"unexpected {tok.text!r} in cft", tok.line, tok.col)
        ts.expect(";")
    if output is None or formula is None:
        raise ParseError(f"cft {name.text} needs an output and a formula", name.line, name.col)
    cft = CFT(formula, output, owner.text, name.text)
    problems = cft_problems(cft, comp)
    if problems:
        raise ParseError(problems[0], name.line, name.col)
    model.cfts[name.text] = cft


def _parse_system(ts, model):
    name = ts.ident("system name")
    _claim(model.systems, name, "system")
    ts.expect("{")
    c = d = None
    connections, bindings, check = [], [], ""
    while not ts.accept("}"):
        tok = ts.ident("'use', 'connect', 'bind' or 'check'")
        if tok.text == "use":
            c_tok, d_tok = ts.ident("component"), ts.ident("component")
            for t in (c_tok, d_tok):
                if t.text not in model.components:
                    raise ParseError(f"unknown component {t.text!r}", t.line, t.col)
            c, d = model.components[c_tok.text], model.components[d_tok.text]
        elif tok.text == "connect":
            if c is None:
                raise ParseError("'connect' before 'use'", tok.line, tok.col)
            src = ts.ident("component")
            ts.expect(".")
            src_port = ts.ident("port")
            ts.expect("->")
            dst = ts.ident("component")
            ts.expect(".")
            dst_port = ts.ident("port")
            if src.text != d.name or dst.text != c.name:
                raise ParseError(f"connections run from {d.name} to {c.name}", src.line, src.col)
            if src_port.text != dst_port.text:
                raise ParseError("connection mismatch: connected ports must share a name", dst_port.line, dst_port.col)
            pd, pc = d.port_map.get(src_port.text), c.port_map.get(dst_port.text)
            if pd is None or pc is None:
                bad = src_port if pd is None else dst_port
                raise ParseError(f"unknown port {bad.text!r}", bad.line, bad.col)
            if pd.direction is not OUT or pc.direction is not IN:
                raise ParseError(f"connection mismatch on {pc.name}: need output of {d.name}, input of {c.name}",
                                 src_port.line, src_port.col)
            if pd.domain != pc.domain:
                raise ParseError(f"domain mismatch on connection {pc.name}", src_port.line, src_port.col)
            connections.append(pc.name)
        elif tok.text == "bind":
            event, etok = _parse_event(ts)
            ts.expect(":=")
            target = ts.ident("cft name")
            bound = model.cfts.get(target.text)
            if bound is None:
                raise ParseError(f"unknown cft {target.text!r}", target.line, target.col)
            if d is None or bound.owner != d.name or bound.output_event != event:
                raise ParseError(f"binding mismatch: {target.text} is not a cft of the producer for {event}",
                                 target.line, target.col)
            bindings.append((event, target.text))
        elif tok.text == "check":
            target = ts.ident("cft name")
            bound = model.cfts.get(target.text)
            if bound is None or c is None or bound.owner != c.name:
                raise ParseError(f"{target.text!r} is not a cft of the consumer", target.line, target.col)
            check = target.text
        else:
            raise ParseError(f"unexpected {tok.text!r} in system", tok.line, tok.col)
        ts.expect(";")
    if c is None:
        raise ParseError(f"system {name.text} has no 'use'", name.line, name.col)
    for event, _ in bindings:
        if event.port not in connections:
            raise ParseError(f"binding for {event} is not on a connected port", name.line, name.col)
    model.systems[name.text] = System(name.text, c.name, d.name, tuple(connections), tuple(bindings), check)


def _ident(x) -> str:
    """Spell a state or component name in the grammar; product states join with ``__``."""
    if isinstance(x, tuple):
        return "__".join(_ident(y) for y in x)
    return re.sub(r"[^A-Za-z0-9_]+", "_", str(x))


def serialize_component(comp: Component) -> str:
    lines = [f"component {_ident(comp.name)} {{"]
    for p in comp.ports:
        kw = "in" if p.direction is IN else "out"
        lines.append(f"  {kw} {p.name} : {{{','.join(p.domain)}}} ;")
    lines.append(f"  init {_ident(comp.initial)} ;")
    for s, m, t in comp.transitions:
        lines.append(f"  {_ident(s)} -- {m} --> {_ident(t)} ;")
    lines.append("}")
    return "\n".join(lines)


def serialize_cft(cft: CFT, name=None) -> str:
    return (f"cft {name or cft.name} on {_ident(cft.owner)} {{ output {cft.output_event} ; "
            f"formula {cft.formula} ; }}")


def serialize_system(system: System) -> str:
    lines = [f"system {system.name} {{", f"  use {system.c} {system.d} ;"]
    lines += [f"  connect {system.d}.{p} -> {system.c}.{p} ;" for p in system.connections]
    lines += [f"  bind {e} := {n} ;" for e, n in system.bindings]
    if system.check:
        lines.append(f"  check {system.check} ;")
    lines.append("}")
    return "\n".join(lines)


def serialize_model(model: Model) -> str:
    parts = [serialize_component(c) for c in model.components.values()]
    parts += [serialize_cft(c) for c in model.cfts.values()]
    parts += [serialize_system(s) for s in model.systems.values()]
    return "\n\n".join(parts) + "\n"


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())

