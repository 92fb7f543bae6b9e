"""The corner collections F_d, the relation bowtie_A, and the Sperner argument.

``F_d`` gathers the tail-form subdivisions of the corner input ``I_d`` in
which processes ``0..d`` hold their own ids and the rest hold ``d``.  Two
facets of ``F_0 u ... u F_k`` are bowtie-related when they share a face
colored by a group ``A = [0,|A|] minus one element``, lie in adjacent
collections, and both have the values ``0..|A|-1`` decided inside ``A``.
Under a decision map that solves k-set agreement every facet but the unique
one in ``F_0`` would have 0 or 2 such neighbours, so a walk from ``F_0`` could
never stop; :func:`witness_path` runs that walk on a concrete candidate map
and reports where it breaks.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Sequence

from . import formulas as F
from .logic import SimplicialModel, eval_mask
from .simplicial import Simplex, facet_from_values
from .subdivision import (OSP, PreconditionError, SubdividedFacet, carrier_colors,
                          enumerate_osp, enumerate_osp_tail, iterated_subdivision,
                          seen_inputs)


class NonSpernerColoringError(ValueError):
    pass


def corner_input(d: int, n: int) -> Simplex:
    """``I_d``: process ``i`` holds ``i`` up to ``d`` and ``d`` afterwards."""
    if not 0 <= d <= n:
        raise ValueError("need 0 <= d <= n")
    return facet_from_values([i if i <= d else d for i in range(n + 1)])


def sequential_osp(n: int) -> OSP:
    return OSP([(i,) for i in range(n + 1)])


@dataclass(frozen=True)
class FdCollection:
    d: int
    n: int
    m: int
    facets: tuple

    def __len__(self):
        return len(self.facets)

    def __iter__(self):
        return iter(self.facets)

    def __contains__(self, sigma):
        return sigma in set(self.facets)


def build_fd(n: int, m: int, d: int) -> FdCollection:
    X = corner_input(d, n)
    tails = enumerate_osp_tail(d, n)
    return FdCollection(d, n, m, tuple(iterated_subdivision(X, h) for h in product(tails, repeat=m)))


def sigma_zero(n: int, m: int) -> SubdividedFacet:
    return iterated_subdivision(corner_input(0, n), [sequential_osp(n)] * m)


def fd_level(sigma: SubdividedFacet) -> int | None:
    """The ``d`` with ``sigma`` in ``F_d``, or None."""
    n = sigma.base.dim
    for d in range(n + 1):
        if sigma.base == corner_input(d, n):
            tails = set(enumerate_osp_tail(d, n))
            return d if all(g in tails for g in sigma.history) else None
    return None


def bowtie_groups(n: int, top: int) -> list:
    """Groups ``A`` within ``[0, |A|]`` of size at most ``top``."""
    out = []
    for size in range(1, top + 1):
        for b in range(size, -1, -1):
            A = frozenset(range(size + 1)) - {b}
            if A <= frozenset(range(n + 1)):
                out.append(A)
    return out


def _structural(level_s: int, level_t: int, A: frozenset) -> bool:
    return max(level_s, level_t) == len(A) and abs(level_s - level_t) <= 1


def dec_holds(decisions: Mapping[int, int], A: Iterable[int]) -> bool:
    """``DEC_A`` evaluated on a decision profile ``{process: value}``."""
    A = sorted(A)
    got = {decisions[a] for a in A}
    return all(d in got for d in range(len(A)))


def bowtie(sigma, tau, A: Iterable[int], M: SimplicialModel) -> bool:
    """Whether ``sigma`` and ``tau`` are bowtie-related via ``A`` in model ``M``."""
    A = frozenset(A)
    if sigma == tau or not A:
        return False
    if not A <= frozenset(range(len(A) + 1)):
        return False
    ds, dt = fd_level(sigma), fd_level(tau)
    if ds is None or dt is None or not _structural(ds, dt, A):
        return False
    if not M.related(sigma, tau, A):
        return False
    sat = eval_mask(M, F.dec(A))
    return bool(sat >> M.index[sigma] & 1) and bool(sat >> M.index[tau] & 1)


def decision_profile(M: SimplicialModel, sigma) -> dict | None:
    """``{process: decided value}`` when each process decides exactly one value."""
    out = {}
    for p in M.labels[M.index[sigma]]:
        if p.kind == "decide":
            if p.process in out:
                return None
            out[p.process] = p.value
    return out if len(out) == M.n + 1 else None


class BowtieGraph:
    """The facets of ``F_0 u ... u F_top`` with their candidate bowtie edges.

    Edges are precomputed from realized vertex sets; a decision labelling then
    only has to switch on the edges whose ``DEC_A`` holds at both ends.
    """

    def __init__(self, n: int, m: int, k: int):
        self.n, self.m, self.k = n, m, k
        self.top = min(k, n)
        self.facets: list = []
        self.level: list = []
        for d in range(self.top + 1):
            for s in build_fd(n, m, d):
                self.facets.append(s)
                self.level.append(d)
        self.index = {s: i for i, s in enumerate(self.facets)}
        verts = {}
        for s in self.facets:
            for v in s.vertexes.sorted_vertexes():
                verts.setdefault(v, len(verts))
        self.vertexes = list(verts)
        self.vertex_index = verts
        self.facet_vertexes = [tuple(verts[(a, dict(s.vertexes)[a])] for a in range(n + 1))
                               for s in self.facets]
        groups = bowtie_groups(n, self.top)
        self.edges: list = []
        for i, j in combinations(range(len(self.facets)), 2):
            fi, fj = self.facet_vertexes[i], self.facet_vertexes[j]
            for A in groups:
                if _structural(self.level[i], self.level[j], A) and all(fi[a] == fj[a] for a in A):
                    self.edges.append((i, j, A))
        self.sigma0 = self.index[sigma_zero(n, m)]

    def domains(self) -> list:
        """Decision values each vertex may take under a valid labelling."""
        out = []
        for v in self.vertexes:
            seen = seen_inputs(v[1])
            out.append(sorted(set(seen.values())))
        return out

    def profiles(self, labelling: Sequence[int]) -> list:
        return [{a: labelling[x] for a, x in enumerate(fv)} for fv in self.facet_vertexes]

    def admissible(self, profile: Mapping[int, int], i: int) -> bool:
        """OFUN, VALID and AGREE_k at facet ``i`` (KNOW holds for vertex labellings)."""
        inputs = set(dict(self.facets[i].base).values())
        vals = set(profile.values())
        return vals <= inputs and len(vals) <= self.k

    def neighbours(self, labelling: Sequence[int]) -> list:
        """For each facet, the set of ``(other, A)`` bowtie pairs."""
        prof = self.profiles(labelling)
        decs: dict = {}
        out = [[] for _ in self.facets]
        for i, j, A in self.edges:
            key_i, key_j = (i, A), (j, A)
            if key_i not in decs:
                decs[key_i] = dec_holds(prof[i], A)
            if key_j not in decs:
                decs[key_j] = dec_holds(prof[j], A)
            if decs[key_i] and decs[key_j]:
                out[i].append((j, A))
                out[j].append((i, A))
        return out

    def degrees(self, labelling: Sequence[int]) -> list:
        return [len({j for j, _ in nb}) for nb in self.neighbours(labelling)]

    def check_degrees(self, labelling: Sequence[int]) -> dict:
        """Degree facts for one labelling.

        ``violations`` lists admissible facets of level >= 1 whose degree is
        neither 0 nor 2; ``odd`` lists the odd-degree facets.
        """
        prof = self.profiles(labelling)
        deg = self.degrees(labelling)
        bad = [i for i in range(len(self.facets))
               if i != self.sigma0 and self.level[i] >= 1 and self.admissible(prof[i], i)
               and deg[i] not in (0, 2)]
        odd = [i for i, g in enumerate(deg) if g % 2]
        return {"sigma0_degree": deg[self.sigma0], "violations": bad, "odd": odd,
                "admissible": [i for i in range(len(self.facets)) if self.admissible(prof[i], i)]}

    def labelling_from(self, decide: Callable) -> list:
        return [decide(v) for v in self.vertexes]

    def random_labelling(self, rng: random.Random) -> list:
        return [rng.choice(dom) for dom in self.domains()]

    def all_labellings(self):
        yield from product(*self.domains())


def bowtie_degree(sigma, M: SimplicialModel, k: int, check: bool = True) -> int:
    """Number of facets of ``F_0 u ... u F_k`` bowtie-related to ``sigma``.

    With ``check`` the preconditions are verified first: ``sigma`` in some
    ``F_d`` with ``1 <= d <= k``, ``VALID`` valid in ``M``, and OFUN, VALID,
    AGREE_k and KNOW at ``sigma``.
    """
    n = M.n
    d = fd_level(sigma)
    if check:
        if d is None or not 1 <= d <= k:
            raise PreconditionError(f"{sigma} is not in F_1..F_{k}")
        if eval_mask(M, F.valid_f(n)) != M.full:
            raise PreconditionError("VALID is not valid in the model")
        req = [F.ofun(n), F.valid_f(n), F.agree(n, k), F.know(n)]
        i = M.index[sigma]
        for name, f in zip(("OFUN", "VALID", "AGREE", "KNOW"), req):
            if not eval_mask(M, f) >> i & 1:
                raise PreconditionError(f"{name} fails at {sigma}")
    top = min(k, n)
    pool = [t for e in range(top + 1) for t in build_fd(n, len(sigma.history), e)]
    groups = bowtie_groups(n, top)
    return len({t for t in pool for A in groups if bowtie(sigma, t, A, M)})


# -- the witness walk -------------------------------------------------------------------

@dataclass
class PathReport:
    """Outcome of walking bowtie edges from sigma_0.

    ``mode`` is ``"contradiction"`` (more distinct facets than exist),
    ``"violation"`` (a facet on the path fails a required formula),
    ``"boundary"`` (the walk ran out of fresh neighbours), or ``"anomaly"``
    (a facet met the requirements yet had an impossible degree).
    """

    mode: str
    path: list = field(default_factory=list)
    groups: list = field(default_factory=list)
    failing: object = None
    failed: list = field(default_factory=list)
    bound: int = 0
    detail: str = ""
    phi_at_start: bool | None = None

    def to_dict(self) -> dict:
        return {"mode": self.mode, "length": len(self.path),
                "path": [str(s) for s in self.path],
                "groups": [sorted(A) for A in self.groups],
                "failing": None if self.failing is None else str(self.failing),
                "failed": list(self.failed), "bound": self.bound, "detail": self.detail,
                "phi_at_start": self.phi_at_start}


def _facet_order(s: SubdividedFacet):
    return (fd_level(s), tuple(str(g) for g in s.history))


def witness_path(M: SimplicialModel, k: int, m: int, max_len: int | None = None,
                 check_phi: bool = True) -> PathReport:
    """Follow bowtie edges from sigma_0 in a factual-change model ``M``.

    Each facet reached is checked for OFUN, VALID, KNOW and AGREE_k; with
    ``check_phi`` the report also records whether the fixpoint formula holds
    at sigma_0.
    """
    n = M.n
    top = min(k, n)
    pool = [t for e in range(top + 1) for t in build_fd(n, m, e)]
    bound = len(pool)
    max_len = bound + 1 if max_len is None else max_len
    groups = bowtie_groups(n, top)
    dec_sat = {A: eval_mask(M, F.dec(A)) for A in groups}
    req = [("OFUN", F.ofun(n)), ("VALID", F.valid_f(n)), ("KNOW", F.know(n)), ("AGREE", F.agree(n, k))]
    sat = {name: eval_mask(M, f) for name, f in req}
    levels = {t: fd_level(t) for t in pool}

    def failures(s, names):
        i = M.index[s]
        return [nm for nm in names if not sat[nm] >> i & 1]

    def neighbours(s):
        i = M.index[s]
        out = []
        for t in pool:
            if t == s:
                continue
            j = M.index[t]
            for A in groups:
                if (_structural(levels[s], levels[t], A) and dec_sat[A] >> i & 1
                        and dec_sat[A] >> j & 1 and M.related(s, t, A)):
                    out.append((t, A))
        return out

    s0 = pool[0]
    phi0 = bool(eval_mask(M, F.phi(n, k)) >> M.index[s0] & 1) if check_phi else None
    bad = failures(s0, ["OFUN", "VALID"])
    if bad:
        return PathReport("violation", [s0], [], s0, bad, bound, "requirements fail at sigma_0", phi0)
    path, used = [s0], []
    visited = {s0}
    prev = None
    while True:
        cur = path[-1]
        if cur != s0:
            bad = failures(cur, [nm for nm, _ in req])
            if bad:
                return PathReport("violation", path, used, cur, bad, bound,
                                  f"step {len(path) - 1} fails {', '.join(bad)}", phi0)
        nb = neighbours(cur)
        facets = {t for t, _ in nb}
        if cur != s0 and len(facets) not in (0, 2):
            if len(facets) == 1 and levels[cur] == n and k > n:
                return PathReport("boundary", path, used, None, [], bound,
                                  "reached the top collection; no higher collection to enter", phi0)
            return PathReport("anomaly", path, used, cur, [], bound,
                              f"admissible facet with {len(facets)} bowtie neighbours", phi0)
        fresh = sorted((t for t in facets if t != prev), key=_facet_order)
        if not fresh:
            return PathReport("boundary", path, used, None, [], bound, "no fresh neighbour", phi0)
        nxt = fresh[0]
        if nxt in visited:
            return PathReport("anomaly", path, used, nxt, [], bound, "walk revisited a facet", phi0)
        A = min((A for t, A in nb if t == nxt), key=lambda g: (len(g), sorted(g)))
        path.append(nxt)
        used.append(A)
        visited.add(nxt)
        prev = cur
        if len(path) >= max_len:
            return PathReport("contradiction", path, used, None, [], bound,
                              f"{len(path)} distinct facets among {bound}", phi0)


# -- Sperner ---------------------------------------------------------------------------------

def sperner_complex(n: int, m: int) -> list:
    """Facets of the m-fold chromatic subdivision of ``{(i, i)}``."""
    X = facet_from_values(range(n + 1))
    return [iterated_subdivision(X, h) for h in product(enumerate_osp(n), repeat=m)]


def sperner_vertexes(n: int, m: int) -> list:
    seen = {}
    for s in sperner_complex(n, m):
        for v in s.vertexes.sorted_vertexes():
            seen.setdefault(v, None)
    return list(seen)


def sperner_odd_count(n: int, m: int, coloring) -> int:
    """Number of facets whose vertexes carry all ``n+1`` colors.

    ``coloring`` maps vertexes to colors (mapping or callable) and must give
    every vertex a color of its minimal carrier face.
    """
    color = coloring.__getitem__ if isinstance(coloring, Mapping) else coloring
    full = frozenset(range(n + 1))
    count = 0
    checked = {}
    for s in sperner_complex(n, m):
        cols = set()
        for v in s.vertexes:
            c = checked.get(v)
            if c is None:
                c = color(v)
                if c not in carrier_colors(v):
                    raise NonSpernerColoringError(
                        f"vertex of color {v[0]} gets {c}, outside its carrier {sorted(carrier_colors(v))}")
                checked[v] = c
            cols.add(c)
        count += cols == full
    return count


def random_sperner_coloring(n: int, m: int, rng: random.Random) -> dict:
    return {v: rng.choice(sorted(carrier_colors(v))) for v in sperner_vertexes(n, m)}
