import random

import pytest
from hypothesis import given, settings, strategies as st

from epimu.logic import (FALSE, TRUE, And, Atom, DKnow, FixpointDivergenceError, FormulaError, NegAtom,
                         Nu, Or, UnboundVariableError, Var, common_knowledge, counterexamples, eval_mask,
                         evaluate, free_vars, implies, indist, inp, negate, rel_D, satisfies, size,
                         SimplicialModel, to_text, unfold, valid)
from epimu.models import three_facet_model
from epimu.parser import ParseError, parse
from oracles import naive_eval, random_formula, random_model

I22 = Atom(inp(2, 2))


@pytest.fixture
def C():
    return three_facet_model()


def test_relations_on_three_facets(C):
    assert C.related("X", "W", {1})
    assert C.related("X", "Y", {1, 2})
    assert not C.related("X", "W", {1, 2})
    assert C.related("Y", "W", {0})
    assert ("X", "X") in indist(C, 0)
    assert rel_D(C, {0, 1, 2}) == {(s, s) for s in "XYW"}


def test_distributed_knowledge_on_three_facets(C):
    assert "X" in evaluate(C, DKnow({1, 2}, I22))
    assert "X" not in evaluate(C, DKnow({1}, I22))


def test_common_knowledge_on_three_facets(C):
    assert satisfies(C, "X", common_knowledge({2}, I22))
    assert not satisfies(C, "X", common_knowledge({0, 2}, I22))


def test_satisfies_errors(C):
    with pytest.raises(KeyError):
        satisfies(C, "Q", I22)
    with pytest.raises(UnboundVariableError):
        satisfies(C, "X", Var("Z"))


def test_true_false_and_empty_group(C):
    assert valid(C, TRUE)
    assert evaluate(C, FALSE) == frozenset()
    with pytest.raises(FormulaError):
        DKnow(set(), TRUE)


def test_nu_of_variable_is_everything(C):
    assert valid(C, Nu("Z", Var("Z")))


def test_nu_rebinding_rejected():
    with pytest.raises(FormulaError):
        Nu("Z", Nu("Z", Var("Z")))


def test_iteration_cap(C):
    phi = common_knowledge({0, 1, 2}, I22)
    with pytest.raises(FixpointDivergenceError):
        eval_mask(C, phi, max_iterations=1)


def test_implies_requires_propositional_antecedent():
    with pytest.raises(FormulaError):
        implies(DKnow({0}, I22), I22)
    assert implies(And([I22, Atom(inp(0, 0))]), FALSE) == Or([Or([NegAtom(inp(2, 2)), NegAtom(inp(0, 0))]), FALSE])


def test_negate_is_involutive():
    phi = Or([And([I22, NegAtom(inp(0, 1))]), Atom(inp(1, 0))])
    assert negate(negate(phi)) == phi


def test_unfold_keeps_denotation(C):
    nu = common_knowledge({2}, I22)
    assert evaluate(C, nu) == evaluate(C, unfold(nu))


def test_counterexamples(C):
    assert counterexamples(C, I22) == ["W"]
    assert counterexamples(C, TRUE) == []


def test_parse_examples():
    assert parse("input(0)=1") == Atom(inp(0, 1))
    assert parse("~input(0)=1") == NegAtom(inp(0, 1))
    assert parse("D{1,2} input(2)=2") == DKnow({1, 2}, I22)
    assert free_vars(parse("nu Z. (input(0)=0 & D{0} Z)")) == frozenset()
    assert parse("input(0)=0 => input(1)=1") == implies(Atom(inp(0, 0)), Atom(inp(1, 1)))
    assert parse("C{0,2} input(2)=2") == common_knowledge({0, 2}, I22)
    assert parse("true") == TRUE and parse("false") == FALSE


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse("input(0)=1 & $")
    assert e.value.pos == 13
    with pytest.raises(ParseError):
        parse("~D{0} input(0)=1")
    with pytest.raises(ParseError):
        parse("D{0} input(0)=1 => input(1)=1")


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_text_round_trip(seed):
    rng = random.Random(seed)
    _, _, props = random_model(rng, 2, 4)
    phi = random_formula(rng, 2, props, rng.randint(0, 4))
    assert parse(to_text(phi)) == phi


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_eval_matches_naive_semantics(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    facets, labels, props = random_model(rng, n, 7)
    M = SimplicialModel(facets, labels, n)
    phi = random_formula(rng, n, props, rng.randint(0, 3))
    got = {M.index[s] for s in evaluate(M, phi)} if not free_vars(phi) else None
    if got is not None:
        assert got == naive_eval(M.facets, M.labels, phi)


def test_size_counts_nodes():
    assert size(And([I22, Or([I22, I22])])) == 5
