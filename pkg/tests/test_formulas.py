import pytest

from epimu import formulas as F
from epimu.logic import And, DKnow, FormulaError, Nu, Or, free_vars, is_closed, simplicial_model, valid
from epimu.models import input_complex, protocol_model_iis, pullback, task_model_sak
from epimu.parser import parse
from epimu.solvability import decide_own_input


def test_phi_shape():
    for n in range(3):
        phi = F.phi(n, 1)
        assert isinstance(phi, Nu) and is_closed(phi)
        implications = phi.body.args[2:]
        assert len(implications) == 2 ** (n + 1) - 1
        assert all(isinstance(c, Or) and isinstance(c.args[1], DKnow) for c in implications)


def test_dec_values():
    assert F.dec({0}) == And([Or([F.Atom(F.dec_atom(0, 0))])])
    assert len(F.dec({0, 2}).args) == 2
    with pytest.raises(FormulaError):
        F.dec(set())


def test_agree_range():
    with pytest.raises(FormulaError):
        F.agree(2, 0)
    with pytest.raises(FormulaError):
        F.phi(1, 3)


def test_named_lookup():
    assert F.named("phi", 1, 1) is F.phi(1, 1)
    with pytest.raises(FormulaError):
        F.named("nope", 1, 1)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_ifun_valid_in_inputs(n):
    assert valid(simplicial_model(input_complex(n).facets, n), F.ifun(n))


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (2, 1)])
def test_ifun_valid_in_protocols(n, m):
    assert valid(protocol_model_iis(n, m).model, F.ifun(n))


@pytest.mark.parametrize("n,k", [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3)])
def test_task_validities(n, k):
    M = task_model_sak(n, k).model
    for f in (F.ofun(n), F.valid_f(n), F.agree(n, k), F.know(n), F.phi(n, k)):
        assert valid(M, f)


def test_agree_fails_with_too_few_values():
    M = task_model_sak(2, 2).model
    assert not valid(M, F.agree(2, 1))
    assert not valid(M, F.phi(2, 1))


def test_ofun_fails_without_decisions():
    assert not valid(task_model_sak(1, 1).plain, F.ofun(1))


def test_pullback_of_own_input_satisfies_everything_at_top_k():
    n = 1
    P = protocol_model_iis(n, 1)
    M = pullback(P, decide_own_input(P, task_model_sak(n, n + 1)))
    for name in F.NAMED:
        assert valid(M, F.named(name, n, n + 1))
    assert not valid(M, F.agree(n, 1))


def test_common_knowledge_text_matches_macro():
    phi = parse("C{0,1} input(0)=0")
    assert free_vars(phi) == frozenset()
