import random
from itertools import product

import pytest

from epimu.models import protocol_model_iis, pullback, task_model_sak
from epimu.obstruction import (BowtieGraph, NonSpernerColoringError, bowtie, bowtie_degree, build_fd,
                               corner_input, dec_holds, fd_level, random_sperner_coloring, sequential_osp,
                               sigma_zero, sperner_complex, sperner_odd_count, sperner_vertexes,
                               witness_path)
from epimu.simplicial import facet_from_values
from epimu.solvability import Morphism, decide_by, decide_own_input, decision_domain
from epimu.subdivision import PreconditionError, carrier_colors, iterated_subdivision


def test_corner_inputs():
    assert corner_input(0, 2) == facet_from_values((0, 0, 0))
    assert corner_input(1, 2) == facet_from_values((0, 1, 1))
    assert corner_input(2, 2) == facet_from_values((0, 1, 2))


@pytest.mark.parametrize("m,d,size", [(1, 0, 1), (1, 1, 3), (1, 2, 13), (2, 0, 1), (2, 1, 9), (2, 2, 169)])
def test_fd_sizes(m, d, size):
    assert len(build_fd(2, m, d)) == size


def test_f0_is_sigma_zero():
    for m in (1, 2):
        assert build_fd(2, m, 0).facets == (sigma_zero(2, m),)
        assert fd_level(sigma_zero(2, m)) == 0


def test_dec_holds():
    assert dec_holds({0: 0, 1: 1}, {0, 1})
    assert not dec_holds({0: 1, 1: 1}, {0, 1})
    assert dec_holds({0: 1, 2: 0}, {2})


def _model(n, m, rule):
    P = protocol_model_iis(n, m)
    return P, pullback(P, decide_by(P, task_model_sak(n, n + 1), rule))


@pytest.mark.parametrize("m", [1, 2])
def test_corner_facet_has_one_neighbour(m):
    n = 2
    P, M = _model(n, m, lambda v, dom: min(dom))
    s0 = sigma_zero(n, m)
    s1 = iterated_subdivision(corner_input(1, n), [sequential_osp(n)] * m)
    assert bowtie(s0, s1, {0}, M) and bowtie(s1, s0, {0}, M)
    assert not bowtie(s0, s0, {0}, M)
    G = BowtieGraph(n, m, 2)
    lab = G.labelling_from(lambda v: min(decision_domain(v, n)))
    nb = G.neighbours(lab)[G.sigma0]
    assert {G.facets[j] for j, _ in nb} == {s1}
    assert {A for _, A in nb} == {frozenset({0})}


def test_bowtie_degree_matches_graph():
    n, m, k = 2, 1, 2
    rng = random.Random(3)
    P = protocol_model_iis(n, m)
    G = BowtieGraph(n, m, k)
    for _ in range(3):
        choice = {v: rng.choice(decision_domain(v, n)) for v in P.vertexes()}
        M = pullback(P, Morphism(P, task_model_sak(n, n + 1), choice))
        lab = G.labelling_from(lambda v: choice[v])
        deg = G.degrees(lab)
        prof = G.profiles(lab)
        for i, s in enumerate(G.facets):
            assert bowtie_degree(s, M, k, check=False) == deg[i]
            if G.level[i] >= 1 and G.admissible(prof[i], i):
                assert bowtie_degree(s, M, k) in (0, 2)


def test_bowtie_degree_preconditions():
    n = 2
    P, M = _model(n, 1, lambda v, dom: max(dom))
    with pytest.raises(PreconditionError):
        bowtie_degree(sigma_zero(n, 1), M, 2)
    top = build_fd(n, 1, 2).facets[0]
    with pytest.raises(PreconditionError):
        bowtie_degree(top, M, 1)


@pytest.mark.parametrize("k", [1, 2])
def test_degrees_exhaustive_m1(k):
    G = BowtieGraph(2, 1, k)
    for lab in G.all_labellings():
        r = G.check_degrees(lab)
        assert r["sigma0_degree"] == 1
        assert r["violations"] == []
        assert len(r["odd"]) % 2 == 0 and G.sigma0 in r["odd"]


def test_witness_path_own_input_reaches_boundary():
    P = protocol_model_iis(1, 1)
    M = pullback(P, decide_own_input(P, task_model_sak(1, 2)))
    r = witness_path(M, 2, 1)
    assert r.mode == "boundary"
    assert r.phi_at_start is True
    assert len(set(r.path)) == len(r.path)


def test_witness_path_finds_violation_for_every_candidate():
    P = protocol_model_iis(1, 1)
    T = task_model_sak(1, 1)
    verts = P.vertexes()
    doms = [decision_domain(v, 1) for v in verts]
    modes = set()
    for vals in product(*doms):
        r = witness_path(pullback(P, Morphism(P, T, dict(zip(verts, vals)))), 1, 1)
        assert r.mode == "violation"
        assert r.failed
        assert len(set(r.path)) == len(r.path)
        modes.add(r.mode)
    assert modes == {"violation"}


def test_sperner_exhaustive_n1():
    for m in (1, 2):
        verts = sperner_vertexes(1, m)
        choices = [sorted(carrier_colors(v)) for v in verts]
        interior = sum(len(c) == 2 for c in choices)
        seen = 0
        for cols in product(*choices):
            assert sperner_odd_count(1, m, dict(zip(verts, cols))) % 2 == 1
            seen += 1
        assert seen == 2 ** interior


def test_sperner_random_n2():
    rng = random.Random(0)
    for m in (1, 2):
        for _ in range(20):
            assert sperner_odd_count(2, m, random_sperner_coloring(2, m, rng)) % 2 == 1


def test_sperner_rejects_bad_coloring():
    verts = sperner_vertexes(1, 1)
    corner = next(v for v in verts if carrier_colors(v) == {0})
    col = {v: min(carrier_colors(v)) for v in verts}
    col[corner] = 1
    with pytest.raises(NonSpernerColoringError):
        sperner_odd_count(1, 1, col)


def test_sperner_complex_size():
    assert len(sperner_complex(2, 1)) == 13
    assert len(sperner_vertexes(2, 1)) == 12
