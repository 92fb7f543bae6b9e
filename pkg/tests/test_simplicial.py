from itertools import product

import pytest
from hypothesis import given, strategies as st

from epimu.models import input_complex, three_facet_model
from epimu.simplicial import (ColorAbsentError, ColorMismatchError, Complex, Simplex, cartesian_product,
                              chi, faces, facet_from_values, is_simplicial_map, view_of)
from oracles import is_simplicial_by_enumeration

X = facet_from_values((0, 1, 2))


def test_colors_and_views():
    assert chi(X) == {0, 1, 2}
    assert view_of(1, X) == 1
    assert X.dim == 2
    with pytest.raises(ColorAbsentError):
        Simplex([(0, 0)]).view(3)


def test_duplicate_colors_rejected():
    with pytest.raises(ValueError):
        Simplex([(0, 0), (0, 1)])


def test_faces_count():
    assert len(faces(X)) == 8
    assert Simplex() in faces(X)


def test_complex_membership_and_dedup():
    C = Complex([X, X, facet_from_values((1, 1, 2))], 2)
    assert len(C) == 2
    assert Simplex([(1, 1), (2, 2)]) in C
    assert Simplex([(0, 2)]) not in C


def test_empty_simplex_dropped():
    assert len(Complex([Simplex()], 0)) == 0


def test_input_complex_size():
    for n in range(3):
        assert len(input_complex(n)) == (n + 1) ** (n + 1)


def test_cartesian_product():
    C = input_complex(1)
    P = cartesian_product(C, C)
    assert len(P) == 16
    for f in P.facets:
        assert chi(f) == {0, 1}
    with pytest.raises(ColorMismatchError):
        cartesian_product(input_complex(1), input_complex(2))


def test_simplicial_map_identity_and_collapse():
    C = Complex(three_facet_model().facets, 2)
    assert is_simplicial_map(lambda v: v, C, C)
    # send every vertex of color 2 to (2, 2): W's image {(0,1),(1,1),(2,2)} is Y, still a facet
    assert is_simplicial_map(lambda v: (2, 2) if v[0] == 2 else v, C, C)
    # send color-0 vertexes to (0, 0): W maps to {(0,0),(1,1),(2,0)}, which is not a face
    assert not is_simplicial_map(lambda v: (0, 0) if v[0] == 0 else v, C, C)
    assert not is_simplicial_map(lambda v: ((v[0] + 1) % 3, v[1]), C, C)


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3), st.integers(0, 2), st.integers(0, 2))
def test_simplicial_map_matches_enumeration(target, a, shift):
    C = input_complex(1)
    D = Complex([facet_from_values(vs) for vs in product(range(2), repeat=2) if vs != (1, 1)], 1)
    f = lambda v: (v[0], (v[1] + shift) % 2) if v[0] == a % 2 else v
    assert is_simplicial_map(f, C, D) == is_simplicial_by_enumeration(f, C.facets, D.facets)
