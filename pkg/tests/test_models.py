from itertools import combinations, product

import pytest

from epimu.logic import dec_atom, inp
from epimu.models import (StateLimitError, TaskState, UnverifiedMorphismError, apply_factual_change,
                          carrier, contention_sets, fubini, iis_state_count,
                          k_concurrency_model, max_contention, protocol_model_iis, pullback,
                          sa_output_complex, task_model_sak)
from epimu.solvability import Morphism, decide_own_input
from epimu.subdivision import OSP, view_in_osp
from oracles import brute_osp


def test_fubini_against_brute_force():
    for k in range(1, 5):
        assert fubini(k) == len(brute_osp(range(k)))
    assert fubini(0) == 1


def _count_task_states(n, k):
    total = 0
    for ins in product(range(n + 1), repeat=n + 1):
        for outs in product(range(n + 1), repeat=n + 1):
            total += set(outs) <= set(ins) and len(set(outs)) <= k
    return total


@pytest.mark.parametrize("n,k", [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3)])
def test_task_model_size(n, k):
    assert len(task_model_sak(n, k)) == _count_task_states(n, k)


def test_task_model_small_cases():
    T = task_model_sak(1, 1)
    assert len(T) == 6
    assert T.lookup((0, 1), (1, 1)) == TaskState((0, 1), (1, 1))
    assert T.lookup((0, 0), (1, 1)) is None
    st = T.lookup((0, 1), (0, 0))
    labels = T.model.labels[T.model.index[st]]
    assert labels == {inp(0, 0), inp(1, 1), dec_atom(0, 0), dec_atom(1, 0)}
    assert T.plain.labels[T.plain.index[st]] == {inp(0, 0), inp(1, 1)}


def test_task_states_share_vertexes_on_both_components():
    T = task_model_sak(1, 2)
    a = T.lookup((0, 1), (0, 1))
    b = T.lookup((0, 0), (0, 0))
    assert T.model.related(a, b, {0})
    assert not T.model.related(a, b, {1})


def test_output_complex():
    assert len(sa_output_complex(2, 1)) == 3
    assert len(sa_output_complex(2, 3)) == 27
    with pytest.raises(ValueError):
        sa_output_complex(2, 0)


@pytest.mark.parametrize("n,m,count", [(1, 1, 12), (1, 2, 36), (2, 1, 351), (2, 2, 4563)])
def test_iis_counts(n, m, count):
    assert iis_state_count(n, m) == count
    assert len(protocol_model_iis(n, m)) == count


def test_iis_vertex_count():
    # n=1, m=1: 2 corner-like solo views per input vertex plus full views
    P = protocol_model_iis(1, 1)
    solo = {v for v in P.vertexes() if len(v[1]) == 1}
    assert len(solo) == 4
    assert len(P.vertexes()) == 4 + 8


def test_state_limit():
    with pytest.raises(StateLimitError) as e:
        protocol_model_iis(3, 2, limit=10 ** 6)
    assert e.value.count == 256 * 75 ** 2


def _contention_by_definition(g1, g2, procs):
    car = {a: frozenset().union(*(view_in_osp(b, g1) for b in view_in_osp(a, g2))) for a in procs}
    best = 0
    for r in range(1, len(procs) + 1):
        for A in combinations(procs, r):
            u = frozenset().union(*(car[a] for a in A))
            if all(car[a] == u for a in A):
                best = max(best, r)
    return best


def test_contention_matches_definition():
    osps = [OSP.parse(t) for t in ("<0|1|2>", "<0,1,2>", "<2|0,1>", "<1|0|2>")]
    for g1, g2 in product(osps, repeat=2):
        assert max_contention((g1, g2)) == _contention_by_definition(g1, g2, [0, 1, 2])
    assert frozenset() in contention_sets((osps[0], osps[0]))


def test_carrier_needs_two_rounds():
    with pytest.raises(ValueError):
        carrier(0, (OSP.parse("<0|1>"),))


def test_k_concurrency_sizes():
    R3 = k_concurrency_model(2, 3)
    assert set(R3.facets) == set(protocol_model_iis(2, 2).facets)
    R1 = k_concurrency_model(2, 1)
    # only the fully sequential runs: the same total order in both rounds
    assert all(g1 == g2 and all(len(b) == 1 for b in g1.blocks)
               for g1, g2 in (s.history for s in R1.facets))
    assert len(R1) == 27 * 6
    assert len(k_concurrency_model(2, 2)) == 1944


def test_pullback_and_factual_change():
    P = protocol_model_iis(1, 1)
    T = task_model_sak(1, 2)
    delta = decide_own_input(P, T)
    M = apply_factual_change(P, delta)
    for i, s in enumerate(P.facets):
        vals = dict(s.base)
        assert M.labels[i] == {inp(a, v) for a, v in vals.items()} | {dec_atom(a, v) for a, v in vals.items()}
    assert M.meta["kind"] == "iis-fc"
    bad = Morphism(P, task_model_sak(1, 1), delta.assignment)
    with pytest.raises(UnverifiedMorphismError):
        apply_factual_change(P, bad)
    assert len(pullback(P, bad)) == len(P)
