"""Builders for the input complex, the set-agreement task and the protocols."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterable

from .logic import SimplicialModel, dec_atom, inp, input_labels
from .simplicial import Complex, Simplex, facet_from_values, product_facet
from .subdivision import (SubdividedFacet, enumerate_osp, subdivide_facet,
                          view_in_osp)

DEFAULT_STATE_LIMIT = 10 ** 6


class StateLimitError(RuntimeError):
    def __init__(self, what: str, count: int, limit: int):
        super().__init__(f"{what} has {count} states, above the limit of {limit}")
        self.count = count
        self.limit = limit


class UnverifiedMorphismError(ValueError):
    pass


def fubini(k: int) -> int:
    """Number of ordered set partitions of a k-element set."""
    a = [1]
    for i in range(1, k + 1):
        a.append(sum(comb(i, j) * a[i - j] for j in range(1, i + 1)))
    return a[k]


def _check_nk(n: int, k: int):
    if n < 0 or not 1 <= k <= n + 1:
        raise ValueError(f"need n >= 0 and 1 <= k <= n+1, got n={n}, k={k}")


@lru_cache(maxsize=None)
def input_complex(n: int) -> Complex:
    """Every assignment of values from ``[0, n]`` to the processes."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Complex((facet_from_values(vs) for vs in product(range(n + 1), repeat=n + 1)), n)


@lru_cache(maxsize=None)
def sa_output_complex(n: int, k: int) -> Complex:
    """Decision assignments with at most ``k`` distinct values."""
    _check_nk(n, k)
    return Complex((facet_from_values(ds) for ds in product(range(n + 1), repeat=n + 1)
                    if len(set(ds)) <= k), n)


# -- task model -----------------------------------------------------------------

@dataclass(frozen=True)
class TaskState:
    inputs: tuple
    outputs: tuple

    @property
    def facet(self) -> Simplex:
        return product_facet(facet_from_values(self.inputs), facet_from_values(self.outputs))


class TaskModel:
    """The k-set agreement product update model over ``I x O_k``.

    ``model`` carries the factual-change labelling (input and decide atoms);
    ``plain`` carries input atoms only.
    """

    def __init__(self, n: int, k: int, states: list):
        self.n, self.k = n, k
        self.states = tuple(states)
        facets = [s.facet for s in self.states]
        fc = [frozenset({inp(a, v) for a, v in enumerate(s.inputs)}
                        | {dec_atom(a, d) for a, d in enumerate(s.outputs)}) for s in self.states]
        meta = {"kind": "sak-fc", "n": n, "k": k}
        self.model = SimplicialModel(facets, fc, n, self.states, meta)
        self.plain = self.model.relabel([frozenset(p for p in l if p.kind == "input") for l in fc],
                                        kind="sak")
        self._by_io = {(s.inputs, s.outputs): s for s in self.states}

    def lookup(self, inputs: tuple, outputs: tuple):
        return self._by_io.get((tuple(inputs), tuple(outputs)))

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"TaskModel(n={self.n}, k={self.k}, states={len(self.states)})"


def task_model_sak(n: int, k: int) -> TaskModel:
    """States ``I x O`` where every decision is somebody's input."""
    _check_nk(n, k)
    states = []
    for X in input_complex(n).facets:
        ins = tuple(v for _, v in X.sorted_vertexes())
        allowed = set(ins)
        for Y in sa_output_complex(n, k).facets:
            outs = tuple(v for _, v in Y.sorted_vertexes())
            if set(outs) <= allowed:
                states.append(TaskState(ins, outs))
    return TaskModel(n, k, states)


# -- protocol models ------------------------------------------------------------------

class ProtocolModel:
    """Facets ``X * g_1 * ... * g_m`` labelled by the input atoms of ``X``."""

    def __init__(self, n: int, m: int, facets: list, kind: str = "iis", **meta):
        self.n, self.m, self.kind = n, m, kind
        self.facets = tuple(facets)
        self.model = SimplicialModel([s.vertexes for s in self.facets],
                                     [input_labels(s.base) for s in self.facets], n, self.facets,
                                     {"kind": kind, "n": n, "m": m, **meta})
        self._vertexes = None

    @property
    def states(self):
        return self.facets

    def vertexes(self) -> list:
        """Distinct vertexes in first-occurrence order."""
        if self._vertexes is None:
            seen = {}
            for s in self.facets:
                for v in s.vertexes.sorted_vertexes():
                    seen.setdefault(v, None)
            self._vertexes = list(seen)
        return self._vertexes

    def __len__(self):
        return len(self.facets)

    def __repr__(self):
        return f"ProtocolModel({self.kind}, n={self.n}, m={self.m}, states={len(self.facets)})"


def iis_state_count(n: int, m: int) -> int:
    return (n + 1) ** (n + 1) * fubini(n + 1) ** m


def _subdivisions(bases: Iterable[Simplex], m: int, osps: tuple) -> list:
    out = []
    for X in bases:
        layer = [((), X)]
        for _ in range(m):
            layer = [(h + (g,), subdivide_facet(f, g)) for h, f in layer for g in osps]
        out.extend(SubdividedFacet(X, h, f) for h, f in layer)
    return out


def protocol_model_iis(n: int, m: int, limit: int = DEFAULT_STATE_LIMIT) -> ProtocolModel:
    """The m-round iterated immediate snapshot model."""
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    count = iis_state_count(n, m)
    if count > limit:
        raise StateLimitError(f"I[IS^{m}] at n={n}", count, limit)
    return ProtocolModel(n, m, _subdivisions(input_complex(n).facets, m, enumerate_osp(n)))


def apply_factual_change(P: ProtocolModel, delta) -> SimplicialModel:
    """Pull the task's factual-change labelling back through a verified morphism."""
    from .solvability import verify_morphism
    if not verify_morphism(delta):
        raise UnverifiedMorphismError("the decision map is not a morphism into the task")
    return pullback(P, delta)


def pullback(P: ProtocolModel, delta) -> SimplicialModel:
    """Input atoms of each facet plus the decide atoms assigned by ``delta``.

    No verification: used to model-check candidate (possibly invalid) maps.
    """
    labels = []
    for s in P.facets:
        decided = {dec_atom(a, delta.decision((a, v))) for a, v in s.vertexes}
        labels.append(input_labels(s.base) | decided)
    return P.model.relabel(labels, kind=P.kind + "-fc")


# -- k-concurrency ------------------------------------------------------------------------

def _osp_history(sigma) -> tuple:
    return sigma.history if isinstance(sigma, SubdividedFacet) else tuple(sigma)


def carrier(a: int, sigma) -> frozenset:
    """Union of the first-round views of the processes ``a`` sees in round two."""
    hist = _osp_history(sigma)
    if len(hist) != 2:
        raise ValueError(f"carrier sets need exactly two rounds, got {len(hist)}")
    g1, g2 = hist
    return frozenset().union(*(view_in_osp(b, g1) for b in view_in_osp(a, g2)))


def contention_sets(sigma) -> set:
    """Process sets whose members all have the carrier of the whole set."""
    hist = _osp_history(sigma)
    procs = sorted(hist[0].ground)
    car = {a: carrier(a, hist) for a in procs}
    out = set()
    for r in range(len(procs) + 1):
        for A in combinations(procs, r):
            union = frozenset().union(*(car[b] for b in A))
            if all(car[a] == union for a in A):
                out.add(frozenset(A))
    return out


def max_contention(sigma) -> int:
    return max(len(A) for A in contention_sets(sigma))


def k_concurrency_model(n: int, k: int, limit: int = DEFAULT_STATE_LIMIT) -> ProtocolModel:
    """Two-round executions whose contention sets all have at most ``k`` members."""
    _check_nk(n, k)
    full = protocol_model_iis(n, 2, limit)
    ok = {}
    keep = []
    for s in full.facets:
        if s.history not in ok:
            ok[s.history] = max_contention(s.history) <= k
        if ok[s.history]:
            keep.append(s)
    return ProtocolModel(n, 2, keep, kind="rk", k_conc=k)


# -- a small hand-built example ---------------------------------------------------------

THREE_FACET_INPUTS = {"X": (0, 1, 2), "Y": (1, 1, 2), "W": (1, 1, 0)}


def three_facet_model() -> SimplicialModel:
    """Three facets over processes 0, 1, 2 named X, Y and W.

    X and Y share the edge of processes 1 and 2, Y and W share the edge of
    processes 0 and 1, and all three share the vertex of process 1.
    """
    names = list(THREE_FACET_INPUTS)
    facets = [facet_from_values(THREE_FACET_INPUTS[s]) for s in names]
    return SimplicialModel(facets, [input_labels(f) for f in facets], 2, names, {"kind": "three-facet"})
