import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cftc.cft import cft_problems
from cftc.component import compose_components
from cftc.errors import ParseError
from cftc.formula import EventRef, Kind
from cftc.generate import GenParams, gen_cft, gen_component, gen_system
from cftc.model import Model, parse_model, serialize_cft, serialize_component, serialize_model
from conftest import MODELS

MINIMAL = """
component echo { in p : {0,1} ; out q : {0,1} ; init s0 ;
  s0 -- p?0 --> a ; s0 -- p?1 --> b ; a -- q!0 --> s0 ; b -- q!1 --> s0 ; }
cft c1 on echo { output q.value ; formula p.value ; }
"""


def test_minimal_file():
    model = parse_model(MINIMAL)
    assert set(model.components) == {"echo"} and set(model.cfts) == {"c1"}
    assert model.cft("c1").output_event == EventRef("q", Kind.VALUE)


@pytest.mark.parametrize("path", sorted(MODELS.glob("*.cft")), ids=lambda p: p.name)
def test_fixture_round_trip(path):
    model = parse_model(path.read_text())
    again = parse_model(serialize_model(model))
    assert again == model


@pytest.mark.parametrize("text, message, line", [
    ("component c {\n in p : {0,1} ;\n init s ;\n s -- x?0 --> s ; }", "unknown port 'x'", 4),
    ("component c { in p : {0,1} ; init s ;\n s -- p?7 --> s ; }", "domain mismatch", 2),
    ("component c { init s ; }\ncomponent c { init s ; }", "duplicate component name", 2),
    ("component c { in p : {0} ; in p : {1} ; init s ; }", "duplicate port name", 1),
    ("component c { in p : {0} ; init s ;\n s -- p!0 --> s ; }", "not an output port", 2),
    ("component c { in p : {0} ; }", "no init state", 1),
    ("component c { in p : {0} ; init s }", "expected ';'", 1),
    ("cft x on nowhere { output q.value ; formula p.value ; }", "unknown component", 1),
    (MINIMAL + "cft c2 on echo { output p.value ; formula p.value ; }", "not on an output port", 5),
    (MINIMAL + "cft c3 on echo { output q.colour ; formula p.value ; }", "unknown event kind", 5),
])
def test_located_errors(text, message, line):
    with pytest.raises(ParseError, match=message) as info:
        parse_model(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}, col")


SYSTEMS = (MODELS / "echo.cft").read_text().split("system")[0]


@pytest.mark.parametrize("body, message", [
    ("use echo emitter ; connect echo.q -> emitter.u ;", "connections run from"),
    ("use echo emitter ; connect emitter.p -> echo.q ;", "share a name"),
    ("use echo emitter ; bind p.value := echo_q ;", "binding mismatch"),
    ("use echo emitter ; bind p.value := emit_p ;", "not on a connected port"),
    ("use echo emitter ; check emit_p ;", "not a cft of the consumer"),
    ("connect emitter.p -> echo.p ;", "before 'use'"),
])
def test_system_errors(body, message):
    with pytest.raises(ParseError, match=message):
        parse_model(SYSTEMS + "system s { " + body + " }")


def test_lookup_errors():
    with pytest.raises(ParseError, match="unknown system"):
        Model().system("nope")


def test_composite_serializes_to_parseable_text(echo_model):
    product = compose_components(echo_model.component("echo"), echo_model.component("emitter"), ["p"])
    parsed = parse_model(serialize_component(product)).component("echo_emitter")
    assert len(parsed.states) == len(product.states)
    assert len(parsed.transitions) == len(product.transitions)


@given(st.integers(0, 5000))
@settings(max_examples=50, deadline=None)
def test_generated_components_round_trip(seed):
    comp = gen_component(seed, GenParams(max_states=4), name="g")
    cft = gen_cft(seed, comp, name="k") if comp.input_ports() and comp.output_ports() else None
    text = serialize_component(comp) + ("\n" + serialize_cft(cft) if cft else "")
    model = parse_model(text)
    back = model.component("g")
    # states without transitions are not written; they can never be observed
    assert (back.ports, back.initial, back.transitions) == (comp.ports, comp.initial, comp.transitions)
    if cft:
        assert model.cft("k") == cft


@given(st.integers(0, 5000))
@settings(max_examples=100, deadline=None)
def test_generated_cfts_are_well_formed(seed):
    spec = gen_system(seed)
    assert cft_problems(spec.cft_c, spec.c) == []
    for event, cft in spec.cfts_d:
        assert cft.output_event == event and cft_problems(cft, spec.d) == []
    assert gen_system(seed) == spec
