"""Generators for the set-agreement formula family.

Everything here is produced programmatically from ``n``, ``k`` and process
groups; nothing is transcribed by hand.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .logic import And, Atom, DKnow, Formula, FormulaError, NegAtom, Nu, Or, Var, dec_atom, implies, inp


def nonempty_subsets(n: int):
    procs = range(n + 1)
    for r in range(1, n + 2):
        for A in combinations(procs, r):
            yield frozenset(A)


def _unique(n: int, atom) -> Formula:
    procs = range(n + 1)
    parts = []
    for a in procs:
        excl = [Or((NegAtom(atom(a, i)), NegAtom(atom(a, j))))
                for i in procs for j in procs if i != j]
        parts.append(And(excl + [Or(Atom(atom(a, i)) for i in procs)]))
    return And(parts)


@lru_cache(maxsize=None)
def ifun(n: int) -> Formula:
    """Each process holds exactly one input value."""
    return _unique(n, inp)


@lru_cache(maxsize=None)
def ofun(n: int) -> Formula:
    """Each process decides exactly one value."""
    return _unique(n, dec_atom)


@lru_cache(maxsize=None)
def valid_f(n: int) -> Formula:
    """Every decided value is some process's input."""
    procs = range(n + 1)
    return And(implies(Atom(dec_atom(a, d)), Or(Atom(inp(b, d)) for b in procs))
               for a in procs for d in procs)


def _check_k(n: int, k: int):
    if not 1 <= k <= n + 1:
        raise FormulaError(f"need 1 <= k <= n+1, got n={n}, k={k}")


@lru_cache(maxsize=None)
def agree(n: int, k: int) -> Formula:
    """All decisions fall within some set of at most ``k`` values."""
    _check_k(n, k)
    procs = range(n + 1)
    return Or(And(Or(Atom(dec_atom(a, d)) for d in sorted(vals)) for a in procs)
              for vals in nonempty_subsets(n) if len(vals) <= k)


@lru_cache(maxsize=None)
def know(n: int) -> Formula:
    """A group knows the decisions of its own members."""
    procs = range(n + 1)
    return And(implies(Atom(dec_atom(a, d)), DKnow(A, Atom(dec_atom(a, d))))
               for A in nonempty_subsets(n) for a in sorted(A) for d in procs)


@lru_cache(maxsize=None)
def _dec(A: frozenset) -> Formula:
    return And(Or(Atom(dec_atom(a, d)) for a in sorted(A)) for d in range(len(A)))


def dec(A: Iterable[int]) -> Formula:
    """Values ``0 .. |A|-1`` are each decided by some member of ``A``."""
    A = frozenset(A)
    if not A:
        raise FormulaError("dec needs a nonempty group")
    return _dec(A)


@lru_cache(maxsize=None)
def phi(n: int, k: int, var: str = "Z") -> Formula:
    """The greatest-fixpoint obstruction formula for k-set agreement."""
    _check_k(n, k)
    z = Var(var)
    return Nu(var, And([ofun(n), valid_f(n)]
                       + [implies(dec(A), DKnow(A, And((know(n), agree(n, k), z))))
                          for A in nonempty_subsets(n)]))


NAMED = {
    "ifun": lambda n, k: ifun(n),
    "ofun": lambda n, k: ofun(n),
    "valid": lambda n, k: valid_f(n),
    "agree": agree,
    "know": lambda n, k: know(n),
    "phi": phi,
}


def named(name: str, n: int, k: int) -> Formula:
    try:
        return NAMED[name](n, k)
    except KeyError:
        raise FormulaError(f"unknown formula {name!r}; known: {', '.join(NAMED)}") from None
