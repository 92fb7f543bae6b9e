"""Decision maps from protocol models into the set-agreement task.

A morphism is determined by one decision per protocol vertex ``(color,
view)``; its input component is the vertex's own input, which is what the
projection condition demands.  Keying decisions on vertexes makes every
candidate well defined and color preserving by construction, so verifying a
map reduces to checking that every facet lands on a task state.

Decisions are searched among the input values that appear in the vertex's
view.  This loses no morphisms: a vertex's view does not depend on the inputs
of the processes it has not seen, so it also belongs to the facet in which all
of those processes hold an input it has seen.  Validity at that facet forces
the decision to be one of the seen values.
"""
from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from typing import Iterable, Mapping

from .logic import eval_mask
from .models import ProtocolModel, TaskModel, pullback
from .subdivision import own_input, seen_inputs

log = logging.getLogger(__name__)


class PartialAssignmentError(ValueError):
    pass


class SearchLimitError(RuntimeError):
    def __init__(self, msg: str, nodes: int, assigned: int, total: int):
        super().__init__(f"{msg} (nodes={nodes}, assigned {assigned}/{total} vertexes)")
        self.nodes = nodes
        self.assigned = assigned
        self.total = total


class Morphism:
    """Decision per protocol vertex, from ``source`` into ``target``.

    ``inputs`` optionally overrides the input component of the image of a
    vertex; a correct morphism never needs it.
    """

    def __init__(self, source: ProtocolModel, target: TaskModel, assignment: Mapping,
                 inputs: Mapping | None = None):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)
        self.inputs = dict(inputs or {})

    def decision(self, vertex):
        try:
            return self.assignment[vertex]
        except KeyError:
            raise PartialAssignmentError(f"no decision for vertex of color {vertex[0]}") from None

    def input_of(self, vertex):
        if vertex in self.inputs:
            return self.inputs[vertex]
        return own_input(vertex)

    def image_io(self, sigma) -> tuple:
        vs = sigma.vertexes.sorted_vertexes()
        return tuple(self.input_of(v) for v in vs), tuple(self.decision(v) for v in vs)

    def image(self, sigma):
        """The task state hit by ``sigma``, or None if it is not a task state."""
        return self.target.lookup(*self.image_io(sigma))

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r}, {len(self.assignment)} vertexes)"


def verify_morphism(delta: Morphism) -> bool:
    """Every facet maps onto a task state whose input part is its own base."""
    missing = [v for v in delta.source.vertexes() if v not in delta.assignment]
    if missing:
        raise PartialAssignmentError(f"{len(missing)} protocol vertexes have no decision")
    for sigma in delta.source.facets:
        ins, outs = delta.image_io(sigma)
        if ins != tuple(v for _, v in sigma.base.sorted_vertexes()):
            return False
        if delta.target.lookup(ins, outs) is None:
            return False
    return True


def decision_domain(vertex, n: int) -> list:
    """Values a vertex may decide: the inputs present in its view."""
    seen = seen_inputs(vertex[1])
    vals = set(seen.values()) if seen else {own_input(vertex)}
    return sorted(v for v in vals if 0 <= v <= n)


def decide_own_input(P: ProtocolModel, T: TaskModel) -> Morphism:
    return Morphism(P, T, {v: own_input(v) for v in P.vertexes()})


def decide_by(P: ProtocolModel, T: TaskModel, rule) -> Morphism:
    """Candidate map deciding ``rule(vertex, domain)`` at each vertex."""
    return Morphism(P, T, {v: rule(v, decision_domain(v, P.n)) for v in P.vertexes()})


@dataclass
class SearchStats:
    nodes: int = 0
    backtracks: int = 0
    restarts: int = 0
    vertexes: int = 0
    facets: int = 0
    exhaustive: bool = False


def search_morphism(P: ProtocolModel, T: TaskModel, node_limit: int | None = None,
                    stats: SearchStats | None = None) -> Morphism | None:
    """Backtracking search for a morphism; None means none exists.

    Forward checking: once a facet shows ``k`` distinct decided values, all
    other vertexes of the facet are restricted to those values.  Branching
    follows the dom/wdeg heuristic (domain size over the accumulated conflict
    weight of the vertex's facets) with geometrically growing restarts, so the
    search converges on the facets that actually cause failures.  The last run
    has no cutoff, which keeps the search exhaustive.
    """
    if P.n != T.n:
        raise ValueError("protocol and task have different process counts")
    stats = stats if stats is not None else SearchStats()
    k = T.k
    verts = P.vertexes()
    vid = {v: i for i, v in enumerate(verts)}
    facets = [tuple(vid[v] for v in s.vertexes) for s in P.facets]
    var_facets: list = [[] for _ in verts]
    for fi, f in enumerate(facets):
        for x in f:
            var_facets[x].append(fi)
    dom = [0] * len(verts)
    for i, v in enumerate(verts):
        for val in decision_domain(v, P.n):
            dom[i] |= 1 << val
    stats.vertexes, stats.facets = len(verts), len(facets)
    weight = [1] * len(facets)
    trail: list = []

    def single(mask):
        return mask and not mask & (mask - 1)

    def propagate(queue) -> bool:
        while queue:
            x = queue.pop()
            for fi in var_facets[x]:
                f = facets[fi]
                used = 0
                for y in f:
                    if single(dom[y]):
                        used |= dom[y]
                cnt = bin(used).count("1")
                if cnt > k:
                    weight[fi] += 1
                    return False
                if cnt == k:
                    for y in f:
                        d = dom[y]
                        if not single(d):
                            nd = d & used
                            if nd != d:
                                if not nd:
                                    weight[fi] += 1
                                    return False
                                trail.append((y, d))
                                dom[y] = nd
                                if single(nd):
                                    queue.append(y)
        return True

    def undo(mark):
        while len(trail) > mark:
            y, d = trail.pop()
            dom[y] = d

    if any(d == 0 for d in dom) or not propagate([i for i, d in enumerate(dom) if single(d)]):
        stats.exhaustive = True
        return None
    trail.clear()

    def choose():
        best, best_score = -1, None
        for i, d in enumerate(dom):
            if not single(d):
                w = sum(weight[fi] for fi in var_facets[i])
                score = bin(d).count("1") / w
                if best_score is None or score < best_score:
                    best, best_score = i, score
        return best

    class _Restart(Exception):
        pass

    def solve(cutoff) -> bool:
        x = choose()
        if x < 0:
            return True
        d = dom[x]
        val = 0
        while d >> val:
            if d >> val & 1:
                stats.nodes += 1
                if node_limit is not None and stats.nodes > node_limit:
                    assigned = sum(1 for e in dom if single(e))
                    raise SearchLimitError("morphism search exceeded its node limit",
                                           stats.nodes, assigned, len(dom))
                if cutoff is not None and stats.nodes > cutoff:
                    raise _Restart
                mark = len(trail)
                trail.append((x, dom[x]))
                dom[x] = 1 << val
                if propagate([x]) and solve(cutoff):
                    return True
                stats.backtracks += 1
                undo(mark)
            val += 1
        return False

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * len(verts) + 1000))
    budget = 64.0
    try:
        while True:
            cutoff = stats.nodes + int(budget) if budget < 1e7 else None
            try:
                found = solve(cutoff)
                break
            except _Restart:
                undo(0)
                stats.restarts += 1
                budget *= 1.5
    finally:
        sys.setrecursionlimit(old_limit)
    stats.exhaustive = not found
    log.debug("morphism search: %s", stats)
    if not found:
        return None
    assignment = {v: dom[i].bit_length() - 1 for i, v in enumerate(verts)}
    delta = Morphism(P, T, assignment)
    assert verify_morphism(delta)
    return delta


def knowledge_gain_failures(delta: Morphism, phi, states: Iterable | None = None) -> list:
    """Sampled states whose image satisfies ``phi`` while the state does not."""
    target = delta.target.model
    pulled = pullback(delta.source, delta)
    sat_t = eval_mask(target, phi)
    sat_p = eval_mask(pulled, phi)
    bad = []
    for X in (delta.source.facets if states is None else states):
        img = delta.image(X)
        if img is None:
            continue
        if sat_t >> target.index[img] & 1 and not sat_p >> pulled.index[X] & 1:
            bad.append(X)
    return bad


def knowledge_gain_check(delta: Morphism, phi, states: Iterable | None = None) -> bool:
    """Whatever holds at the image of a state also holds at the state."""
    return not knowledge_gain_failures(delta, phi, states)
