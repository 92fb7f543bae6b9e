"""Chromatic simplicial complexes.

A vertex is a pair ``(color, value)`` where the color is a process id.  Values
form a closed recursive datum: a base value (an ``int``), a pair of values
(a ``tuple`` of length two, produced by cartesian products), or a view (a
:class:`Simplex`, produced by chromatic subdivision).
"""
from __future__ import annotations

from itertools import chain, combinations
from typing import Callable, Hashable, Iterable, Mapping, Union

Value = Hashable
Vertex = tuple  # (color, value)


class ColorAbsentError(KeyError):
    pass


class ColorMismatchError(ValueError):
    pass


def value_key(v: Value):
    """Total, deterministic sort key over base values, pairs and views."""
    if isinstance(v, frozenset):
        return (2, tuple(sorted((c, value_key(x)) for c, x in v)))
    if isinstance(v, tuple):
        return (1, tuple(value_key(x) for x in v))
    return (0, v)


def vertex_key(v: Vertex):
    return (v[0], value_key(v[1]))


class Simplex(frozenset):
    """A set of vertexes with pairwise distinct colors."""

    def __new__(cls, vertexes: Iterable[Vertex] = ()):
        self = super().__new__(cls, (tuple(v) for v in vertexes))
        if len({c for c, _ in self}) != len(self):
            raise ValueError(f"vertex colors are not distinct: {sorted(self, key=vertex_key)}")
        return self

    @property
    def dim(self) -> int:
        return len(self) - 1

    @property
    def colors(self) -> frozenset:
        return frozenset(c for c, _ in self)

    def view(self, a: int) -> Value:
        for c, v in self:
            if c == a:
                return v
        raise ColorAbsentError(a)

    def sorted_vertexes(self) -> tuple:
        return tuple(sorted(self, key=vertex_key))

    def restrict(self, colors: Iterable[int]) -> "Simplex":
        keep = set(colors)
        return Simplex(v for v in self if v[0] in keep)

    def __repr__(self):
        inner = ",".join(f"({c},{_fmt_value(v)})" for c, v in self.sorted_vertexes())
        return "{" + inner + "}"

    __str__ = __repr__


def _fmt_value(v: Value) -> str:
    if isinstance(v, Simplex):
        return repr(v)
    if isinstance(v, tuple):
        return "(" + ",".join(_fmt_value(x) for x in v) + ")"
    return str(v)


def chi(s: Iterable[Vertex]) -> frozenset:
    """Colors of the vertexes of ``s``."""
    return frozenset(c for c, _ in s)


def view_of(a: int, s: Simplex) -> Value:
    """The value ``v`` with ``(a, v)`` in ``s``."""
    return Simplex(s).view(a) if not isinstance(s, Simplex) else s.view(a)


def faces(s: Iterable[Vertex]) -> set:
    """All faces of ``s``, from the empty simplex up to ``s`` itself."""
    vs = sorted(s, key=vertex_key)
    return {Simplex(c) for c in chain.from_iterable(combinations(vs, r) for r in range(len(vs) + 1))}


def facet_from_values(values: Iterable[Value]) -> Simplex:
    """The facet ``{(0, v_0), ..., (n, v_n)}``."""
    return Simplex(enumerate(values))


class Complex:
    """A complex given by its facets; faces are implicit.

    Facets are deduplicated and kept in a canonical order so that the facet
    sequence doubles as a stable state numbering.
    """

    def __init__(self, facets: Iterable[Iterable[Vertex]], n: int):
        fs = {s if isinstance(s, Simplex) else Simplex(s) for s in facets}
        fs.discard(Simplex())
        if len({len(f) for f in fs}) > 1:
            fs = {f for f in fs if not any(f < g for g in fs)}
        self.n = n
        self.facets: tuple = tuple(sorted(fs, key=_facet_key))
        self._facet_set = frozenset(self.facets)

    @property
    def colors(self) -> frozenset:
        return frozenset(range(self.n + 1))

    def vertexes(self) -> set:
        return {v for f in self.facets for v in f}

    def __contains__(self, s) -> bool:
        s = s if isinstance(s, Simplex) else Simplex(s)
        return s in self._facet_set or any(s <= f for f in self.facets)

    def __len__(self):
        return len(self.facets)

    def __iter__(self):
        return iter(self.facets)

    def __eq__(self, other):
        return isinstance(other, Complex) and self.n == other.n and self._facet_set == other._facet_set

    def __hash__(self):
        return hash((self.n, self._facet_set))

    def __repr__(self):
        return f"Complex(n={self.n}, facets={len(self.facets)})"


def _facet_key(f: Simplex):
    return tuple(vertex_key(v) for v in f.sorted_vertexes())


def cartesian_product(C: Complex, D: Complex) -> Complex:
    """Facets ``X x Y`` pairing the values of same-colored vertexes."""
    if C.colors != D.colors:
        raise ColorMismatchError(f"color sets differ: {sorted(C.colors)} vs {sorted(D.colors)}")
    return Complex((product_facet(X, Y) for X in C.facets for Y in D.facets), C.n)


def product_facet(X: Simplex, Y: Simplex) -> Simplex:
    ys = dict(Y)
    return Simplex((a, (u, ys[a])) for a, u in X if a in ys)


VertexMap = Union[Mapping, Callable]


def is_simplicial_map(f: VertexMap, C: Complex, D: Complex) -> bool:
    """Whether ``f`` preserves colors and sends every facet of C into D."""
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    image = {}
    for v in C.vertexes():
        w = fn(v)
        if w[0] != v[0]:
            return False
        image[v] = tuple(w)
    return all(Simplex(image[v] for v in X) in D for X in C.facets)
