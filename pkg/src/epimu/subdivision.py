"""Ordered set partitions and the iterated standard chromatic subdivision.

A facet ``X * g_1 * ... * g_m`` of the m-round immediate-snapshot subdivision
is named by its base input facet and a history of ordered set partitions.
Round ``i+1`` runs on the round-``i`` facet, whose vertex values are views;
views are materialized as :class:`~epimu.simplicial.Simplex` values, so the
indistinguishability of two facets can always be recomputed from vertexes.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .simplicial import Simplex


class PartialInputError(ValueError):
    pass


class UndefinedFlipError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class OrderedSetPartition:
    """Concurrency classes ``<A_1 | ... | A_r>``, each block stored sorted."""

    blocks: tuple

    def __init__(self, blocks: Iterable[Iterable[int]]):
        bs = tuple(tuple(sorted(b)) for b in blocks)
        if not bs or any(not b for b in bs):
            raise ValueError("an ordered set partition needs nonempty blocks")
        flat = [a for b in bs for a in b]
        if len(flat) != len(set(flat)):
            raise ValueError(f"blocks overlap: {bs}")
        object.__setattr__(self, "blocks", bs)

    @property
    def ground(self) -> frozenset:
        return frozenset(a for b in self.blocks for a in b)

    def block_index(self, a: int) -> int:
        for i, b in enumerate(self.blocks):
            if a in b:
                return i
        raise KeyError(a)

    def view(self, a: int) -> frozenset:
        return view_in_osp(a, self)

    def __str__(self):
        return "<" + "|".join(",".join(map(str, b)) for b in self.blocks) + ">"

    def __repr__(self):
        return f"OSP{self}"

    @classmethod
    def parse(cls, text: str) -> "OrderedSetPartition":
        m = re.fullmatch(r"\s*<(.*)>\s*", text)
        if not m:
            raise ValueError(f"not an ordered set partition: {text!r}")
        return cls([int(x) for x in part.split(",")] for part in m.group(1).split("|"))


OSP = OrderedSetPartition


def _compositions(total: int):
    """Compositions of ``total`` into positive parts, in lexicographic order."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def _fill(items: tuple, sizes: tuple):
    if not sizes:
        yield ()
        return
    for block in combinations(items, sizes[0]):
        rest = tuple(x for x in items if x not in block)
        for tail in _fill(rest, sizes[1:]):
            yield (block,) + tail


def ordered_partitions(items: Sequence[int]) -> list:
    items = tuple(sorted(items))
    return [OSP(bs) for sizes in _compositions(len(items)) for bs in _fill(items, sizes)]


@lru_cache(maxsize=None)
def enumerate_osp(n: int) -> tuple:
    """All ordered set partitions of ``[0, n]``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return tuple(ordered_partitions(range(n + 1)))


@lru_cache(maxsize=None)
def enumerate_osp_tail(d: int, n: int) -> tuple:
    """Partitions ``<A_1|...|A_r|d+1|...|n>`` whose leading blocks cover ``[0, d]``."""
    if not 0 <= d <= n:
        raise ValueError("need 0 <= d <= n")
    tail = tuple((i,) for i in range(d + 1, n + 1))
    return tuple(OSP(g.blocks + tail) for g in enumerate_osp(d))


def view_in_osp(a: int, gamma: OrderedSetPartition) -> frozenset:
    """Processes seen by ``a``: the union of blocks up to and including a's."""
    seen = set()
    for b in gamma.blocks:
        seen.update(b)
        if a in b:
            return frozenset(seen)
    raise KeyError(a)


def subdivide_facet(X: Simplex, gamma: OrderedSetPartition) -> Simplex:
    """The facet ``X * gamma``: each vertex carries its snapshot view of X."""
    X = X if isinstance(X, Simplex) else Simplex(X)
    if X.colors != gamma.ground:
        raise PartialInputError(f"facet colors {sorted(X.colors)} do not match {gamma}")
    vals = dict(X)
    out = []
    seen: list = []
    for block in gamma.blocks:
        seen.extend(block)
        view = Simplex((b, vals[b]) for b in seen)
        out.extend((a, view) for a in block)
    return Simplex(out)


@dataclass(frozen=True)
class SubdividedFacet:
    """``base * history[0] * ... * history[-1]``; equality ignores the realization."""

    base: Simplex
    history: tuple
    vertexes: Simplex = field(compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.history)

    def __str__(self):
        return f"{self.base}*" + "*".join(str(g) for g in self.history)


def iterated_subdivision(X: Simplex, history: Sequence[OrderedSetPartition]) -> SubdividedFacet:
    if not history:
        raise ValueError("history must be nonempty")
    X = X if isinstance(X, Simplex) else Simplex(X)
    facet = X
    for g in history:
        facet = subdivide_facet(facet, g)
    return SubdividedFacet(X, tuple(history), facet)


def own_input(vertex) -> object:
    """Unfold a subdivision vertex down to its base input value."""
    a, v = vertex
    while isinstance(v, Simplex):
        v = v.view(a)
    return v


def seen_inputs(value) -> dict:
    """Base inputs ``{process: value}`` transitively contained in a view."""
    if not isinstance(value, Simplex):
        return {}
    out = {}
    stack = [value]
    while stack:
        view = stack.pop()
        for b, w in view:
            if isinstance(w, Simplex):
                stack.append(w)
            else:
                out[b] = w
    return out


def carrier_colors(vertex) -> frozenset:
    """Colors of the minimal face of the base that carries a subdivision vertex."""
    _, v = vertex
    if not isinstance(v, Simplex):
        return frozenset((vertex[0],))
    return frozenset(seen_inputs(v))


# -- flip and the tail-form incidence relation ----------------------------------

def _split_tail(gamma: OrderedSetPartition, d: int) -> tuple:
    n = max(gamma.ground)
    tail = tuple((i,) for i in range(d + 1, n + 1))
    k = len(gamma.blocks) - len(tail)
    if k < 1 or gamma.blocks[k:] != tail or frozenset(x for b in gamma.blocks[:k] for x in b) != frozenset(range(d + 1)):
        raise PreconditionError(f"{gamma} is not of tail form for d={d}")
    return gamma.blocks[:k], tail


def group_parameters(A: Iterable[int]) -> tuple:
    """``(d, b)`` with ``A = [0, d] minus {b}``; needs ``A`` within ``[0, |A|]``."""
    A = frozenset(A)
    d = len(A)
    missing = frozenset(range(d + 1)) - A
    if len(missing) != 1 or not A <= frozenset(range(d + 1)):
        raise PreconditionError(f"{sorted(A)} is not of the form [0,d] minus one element")
    return d, next(iter(missing))


def last_block_is(gamma: OrderedSetPartition, d: int, b: int) -> bool:
    lead, _ = _split_tail(gamma, d)
    return lead[-1] == (b,)


def flip(A: Iterable[int], gamma: OrderedSetPartition) -> OrderedSetPartition:
    """The tail-form partition adjacent to ``gamma`` across the face missing ``b``.

    Only the snapshot of ``b`` changes: if ``b`` shares its block with others
    it is split off into a singleton placed just before the rest of the block;
    if ``b`` is alone in a block other than the last leading one, it is merged
    into the next block.
    """
    d, b = group_parameters(A)
    lead, tail = _split_tail(gamma, d)
    s = next(i for i, blk in enumerate(lead) if b in blk)
    blk = lead[s]
    if len(blk) > 1:
        rest = tuple(x for x in blk if x != b)
        new = lead[:s] + ((b,), rest) + lead[s + 1:]
    elif s < len(lead) - 1:
        new = lead[:s] + (lead[s + 1] + (b,),) + lead[s + 2:]
    else:
        raise UndefinedFlipError(f"flip of {gamma} is undefined: {b} is alone in the last leading block")
    return OSP(new + tail)


def flip_as_printed(A: Iterable[int], gamma: OrderedSetPartition) -> OrderedSetPartition:
    """The three-case flip with ``b`` split off *after* the rest of its block.

    Kept for comparison only: it does not preserve the views of the other
    processes, so it is not the adjacency used by :func:`incident_by_osp`.
    """
    d, b = group_parameters(A)
    lead, tail = _split_tail(gamma, d)
    s = next(i for i, blk in enumerate(lead) if b in blk)
    blk = lead[s]
    if len(blk) > 1:
        rest = tuple(x for x in blk if x != b)
        new = lead[:s] + (rest, (b,)) + lead[s + 1:]
    elif s < len(lead) - 1:
        new = lead[:s] + (lead[s + 1] + (b,),) + lead[s + 2:]
    else:
        raise UndefinedFlipError(f"flip of {gamma} is undefined")
    return OSP(new + tail)


def incident_by_osp(sigma: SubdividedFacet, A: Iterable[int], d: int, b: int,
                    bases: Iterable[Simplex] | None = None, strict: bool = True) -> set:
    """Tail-form facets group-``A``-related to ``sigma``, computed combinatorially.

    ``bases`` is the pool of candidate base facets (default: all input facets
    over ``[0, n]`` with values in ``[0, n]``).  With ``strict`` the facet
    itself is excluded.

    If ``b`` is the last leading block in every round, the members of ``A``
    never see ``b`` or the tail, so only the base may change, within its
    ``A``-class.  Otherwise let ``j`` be the last round in which ``b`` is seen:
    the base may change only outside ``[0, d]``, rounds other than ``j`` are
    fixed, and round ``j`` is either kept or flipped.
    """
    A = frozenset(A)
    if group_parameters(A) != (d, b):
        raise PreconditionError(f"A={sorted(A)} is not [0,{d}] minus {{{b}}}")
    n = sigma.base.dim
    for g in sigma.history:
        _split_tail(g, d)
    if bases is None:
        from .models import input_complex
        bases = input_complex(n).facets
    base_vals = dict(sigma.base)

    def agrees(Y, colors):
        y = dict(Y)
        return all(y[c] == base_vals[c] for c in colors)

    hidden = [last_block_is(g, d, b) for g in sigma.history]
    out = set()
    if all(hidden):
        for Y in bases:
            if agrees(Y, A):
                out.add(iterated_subdivision(Y, sigma.history))
    else:
        j = max(i for i, h in enumerate(hidden) if not h)
        known = frozenset(range(d + 1))
        alternatives = [sigma.history[j], flip(A, sigma.history[j])]
        for Y in bases:
            if not agrees(Y, known):
                continue
            for g in alternatives:
                hist = sigma.history[:j] + (g,) + sigma.history[j + 1:]
                out.add(iterated_subdivision(Y, hist))
    if strict:
        out.discard(sigma)
    return out
