import itertools

import pytest
from hypothesis import given, settings

from cftc.errors import FormulaError, ParseError
from cftc.formula import (
    And,
    EventRef,
    Kind,
    Lit,
    NegClause,
    Or,
    canonical_clauses,
    eval_formula,
    events,
    formulas_equiv,
    neg_dnf,
    parse_formula,
    substitute,
    substitute_strict,
)
from strategies import formulas

A1, A2, A3 = (EventRef(f"a{i}", Kind.VALUE) for i in (1, 2, 3))
B1, B2 = (EventRef(f"b{i}", Kind.VALUE) for i in (1, 2))
L = Lit


def negation_holds(p, clauses, assignment):
    return any(all(not assignment[e] for e in c) for c in clauses)


def truth_table_agrees(p, clauses):
    evs = sorted(events(p))
    for bits in itertools.product((False, True), repeat=len(evs)):
        a = dict(zip(evs, bits))
        if (not eval_formula(p, a)) != negation_holds(p, clauses, a):
            return False
    return True


@pytest.mark.parametrize("p, expected", [
    (L(A1), [{A1}]),
    (And((L(A1), L(A2))), [{A1}, {A2}]),
    (Or((L(A1), And((L(A2), L(A3))))), [{A1, A2}, {A1, A3}]),
])
def test_neg_dnf_examples(p, expected):
    assert [set(c.events) for c in neg_dnf(p)] == expected
    assert truth_table_agrees(p, neg_dnf(p))


@given(formulas())
@settings(max_examples=300)
def test_neg_dnf_matches_truth_table(p):
    assert truth_table_agrees(p, neg_dnf(p))


@given(formulas())
def test_neg_dnf_is_canonical(p):
    out = neg_dnf(p)
    assert out == neg_dnf(p)
    assert out == canonical_clauses(c.events for c in out)
    sets = [set(c.events) for c in out]
    assert not any(x < y for x in sets for y in sets)


def test_eval_examples():
    assert eval_formula(Or((L(A1), L(A2))), {A1: True, A2: False})
    assert not eval_formula(And((L(A1), L(A2))), {A1: True, A2: False})
    assert not eval_formula(Or((L(A1), And((L(A2), L(A3))))), {A1: False, A2: False, A3: False})


def test_eval_needs_every_event():
    with pytest.raises(FormulaError, match="unassigned event"):
        eval_formula(And((L(A1), L(A2))), {A1: True})


def test_formulas_equiv_examples():
    assert formulas_equiv(Or((L(A1), L(A2))), Or((L(A2), L(A1))))
    assert formulas_equiv(L(A1), And((L(A1), L(A1))))
    assert not formulas_equiv(L(A1), L(A2))


def test_substitute_examples():
    assert substitute(Or((L(A1), L(A2))), A2, And((L(B1), L(B2)))) == Or((L(A1), And((L(B1), L(B2)))))
    assert substitute(L(A1), A2, L(B1)) == L(A1)
    assert substitute(And((L(A2), L(A2))), A2, L(B1)) == And((L(B1), L(B1)))


def test_substitute_strict_keeps_the_event():
    # The replaced node is a | q so that ~a sits next to every clause of ~q.
    assert substitute_strict(Or((L(A1), L(A2))), A2, L(B1)) == Or((L(A1), Or((L(A2), L(B1)))))
    assert substitute_strict(L(A1), A2, L(B1)) == L(A1)
    q = Or((L(B1), L(B2)))
    assert substitute_strict(L(A2), A2, q) == Or((L(A2), q))
    assert [set(c.events) for c in neg_dnf(substitute_strict(L(A2), A2, And((L(B1), L(B2)))))] == [
        {A2, B1}, {A2, B2}]


@given(formulas(), formulas())
@settings(max_examples=150)
def test_strict_and_plain_agree_when_event_matches_its_tree(p, q):
    a = sorted(events(p))[0]
    plain, strict = substitute(p, a, q), substitute_strict(p, a, q)
    evs = sorted(events(plain) | events(strict))
    for bits in itertools.product((False, True), repeat=len(evs)):
        asg = dict(zip(evs, bits))
        if a in asg and asg[a] != eval_formula(q, asg):
            continue
        assert eval_formula(plain, asg) == eval_formula(strict, asg)


@given(formulas(), formulas())
@settings(max_examples=150)
def test_strict_clauses_refine_plain_clauses(p, q):
    # plain implies strict, so each strict clause contains some plain clause
    a = sorted(events(p))[0]
    plain = {frozenset(c.events) for c in neg_dnf(substitute(p, a, q))}
    for c in neg_dnf(substitute_strict(p, a, q)):
        assert any(pc <= set(c.events) for pc in plain)


def test_parse_precedence():
    p = parse_formula("p.value | r.exists & s.value")
    assert p == Or((Lit(EventRef("p", Kind.VALUE)), And((Lit(EventRef("r", Kind.EXISTS)), Lit(EventRef("s", Kind.VALUE))))))
    assert parse_formula(str(p)) == p


@given(formulas())
def test_parse_round_trip(p):
    assert formulas_equiv(parse_formula(str(p)), p)


@pytest.mark.parametrize("text, where", [("", "col 1"), ("p.value &", "col 10"), ("p.size", "col 3"),
                                         ("(p.value", "col 9"), ("p.value q.value", "col 9")])
def test_parse_errors_are_located(text, where):
    with pytest.raises(ParseError, match=where):
        parse_formula(text)


def test_nodes_need_two_children():
    with pytest.raises(FormulaError):
        And((L(A1),))


def test_clause_rejects_empty():
    with pytest.raises(FormulaError):
        NegClause.of([])
