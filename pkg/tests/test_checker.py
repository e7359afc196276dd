import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cftc.cft import CFT
from cftc.checker import (
    Bounds,
    Counterexample,
    check_cft,
    check_clause,
    check_clause_oracle,
    simplify_counterexample,
    verify_counterexample,
)
from cftc.component import IN, OUT, Component, PortDecl, inp, out
from cftc.environment import EnvTable
from cftc.equivalence import ByClauseAndEvent, msg_irrelevant
from cftc.errors import PreconditionError
from cftc.formula import And, EventRef, Kind, Lit, NegClause
from oracles import is_counterexample
from strategies import tiny_instance

PV, PE = EventRef("p", Kind.VALUE), EventRef("p", Kind.EXISTS)
RE, RV = EventRef("r", Kind.EXISTS), EventRef("r", Kind.VALUE)
QV = EventRef("q", Kind.VALUE)
SMALL = Bounds(4, 1, 2)


def clause(*evs):
    return NegClause.of(evs)


def test_echo_value_clause_is_correct(echo):
    assert check_clause(echo, clause(PV), QV).correct
    assert check_clause_oracle(echo, clause(PV), QV, SMALL).correct


def test_unused_port_clause_is_refuted(unused_model):
    comp = unused_model.component("echo_r")
    verdict = check_clause(comp, clause(RE), QV)
    assert not verdict.correct
    assert is_counterexample(comp, verdict.counterexample, ByClauseAndEvent(clause(RE), QV), Bounds())
    assert not check_clause_oracle(comp, clause(RE), QV, SMALL).correct


def test_silent_component_is_correct():
    silent = Component("silent", (PortDecl("p", IN, "01"), PortDecl("q", OUT, "01")), "s0",
                       (("s0", inp("p", 0), "s0"), ("s0", inp("p", 1), "s0")))
    for c in (clause(PE), clause(RE)):
        assert check_clause(silent, c, QV).correct
        assert check_clause_oracle(silent, c, QV, SMALL).correct


def test_empty_alphabet():
    bare = Component("bare", (), "s0", ())
    assert check_clause(bare, clause(PV), QV).correct
    assert check_clause_oracle(bare, clause(PV), QV).correct


def test_refuted_verdict_format(unused_model):
    verdict = check_clause(unused_model.component("echo_r"), clause(RE), QV)
    assert verdict.format("machine").splitlines() == [
        "VERDICT clause=~r.exists result=refuted",
        "  trace_f: p?0.q!0",
        "  env_f depth=3:",
        "    ε : {p?0}",
        "  env_c depth=3:",
        "  witnesses:",
        "    ε diverges@0",
    ]
    assert verdict.status == "Refuted"


def test_cft_checks_one_verdict_per_clause(unused_model):
    comp = unused_model.component("echo_r")
    both = CFT(And((Lit(PV), Lit(RE))), QV, "echo_r")
    verdicts = check_cft(comp, both)
    assert [(str(v.clause), v.correct) for v in verdicts] == [("~p.value", True), ("~r.exists", False)]
    fine = check_cft(comp, unused_model.cft("echo_q"))
    assert [str(v.clause) for v in fine] == ["~p.value&~r.exists"] and fine[0].correct


def test_nondeterministic_component_is_rejected():
    bad = Component("bad", (PortDecl("p", IN, "01"), PortDecl("q", OUT, "01")), "s0",
                    (("s0", out("q", 0), "s0"), ("s0", out("q", 1), "s0")))
    with pytest.raises(PreconditionError, match="precondition violated"):
        check_clause(bad, clause(PV), QV)
    with pytest.raises(PreconditionError, match="precondition violated"):
        check_clause_oracle(bad, clause(PV), QV)


def test_output_event_must_not_be_an_input(echo):
    with pytest.raises(PreconditionError):
        check_clause(echo, clause(QV), PV)


@pytest.mark.parametrize("seed", range(12))
def test_tiny_instances_agree_with_oracle(seed):
    comp, c, e = tiny_instance(seed)
    b = Bounds(3, 1, 2)
    fast, slow = check_clause(comp, c, e, b), check_clause_oracle(comp, c, e, b)
    assert fast.correct == slow.correct
    rel = ByClauseAndEvent(c, e)
    for v in (fast, slow):
        if not v.correct:
            assert is_counterexample(comp, v.counterexample, rel, b)


@given(st.integers(0, 400), st.integers(0, 2), st.integers(0, 1))
@settings(max_examples=40, deadline=None)
def test_counterexamples_survive_larger_trace_and_offer_bounds(seed, extra_depth, extra_offers):
    comp, c, e = tiny_instance(seed)
    b = Bounds(3, 2, 1).for_component(comp)
    v = check_clause(comp, c, e, b)
    if v.correct:
        return
    bigger = Bounds(b.trace_depth + extra_depth, b.env_depth, b.max_offers + extra_offers, b.witness_depth)
    assert verify_counterexample(comp, v.counterexample, ByClauseAndEvent(c, e), bigger) is None
    assert not check_clause(comp, c, e, bigger).correct


def test_simplified_unused_port_counterexample(unused_model):
    comp = unused_model.component("echo_r")
    rel = ByClauseAndEvent(clause(RE), QV)
    cex = check_clause(comp, clause(RE), QV).counterexample
    simple = simplify_counterexample(comp, cex, rel)
    assert all(len(msgs) <= 1 for _, msgs in simple.env_c.entries)
    assert is_counterexample(comp, simple, rel, Bounds(), check_offers=False)
    assert simplify_counterexample(comp, simple, rel) == simple


def test_simplify_drops_irrelevant_correct_offers(unused_model):
    comp = unused_model.component("echo_r")
    rel = ByClauseAndEvent(clause(RV), QV)
    cex = Counterexample(EnvTable(3, (((), [inp("p", 0)]),)), EnvTable(3, (((), [inp("p", 1)]),)),
                         (inp("p", 0), out("q", 0)))
    assert is_counterexample(comp, cex, rel, Bounds())
    simple = simplify_counterexample(comp, cex, rel)
    assert not any(msg_irrelevant(m, rel) for _, msgs in simple.env_c.entries for m in msgs)
    assert is_counterexample(comp, simple, rel, Bounds(), check_offers=False)


@pytest.mark.parametrize("seed", range(40))
def test_simplification_preserves_tiny_counterexamples(seed):
    comp, c, e = tiny_instance(seed)
    b = Bounds(3, 1, 2)
    v = check_clause(comp, c, e, b)
    if v.correct:
        return
    rel = ByClauseAndEvent(c, e)
    simple = simplify_counterexample(comp, v.counterexample, rel, b)
    assert is_counterexample(comp, simple, rel, b, check_offers=False)


def test_wider_witness_search_can_only_clear_a_clause(unused_model):
    comp = unused_model.component("echo_r")
    narrow, wide = Bounds(2, 1, 1, witness_depth=2), Bounds(2, 1, 1, witness_depth=6)
    for c in (clause(RE), clause(PV), clause(PE)):
        if check_clause(comp, c, QV, wide).correct is False:
            assert not check_clause(comp, c, QV, narrow).correct
