"""Positive epistemic mu-calculus over simplicial models.

Formulas are immutable dataclasses.  Negation exists only on atoms, so every
formula is positive by construction and greatest fixpoints are monotone.
Denotations are computed as bitsets (Python ints, bit ``i`` = state ``i``);
the public API converts them back to sets of states.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .simplicial import Simplex, vertex_key


class FormulaError(ValueError):
    pass


class UnboundVariableError(KeyError):
    pass


class FixpointDivergenceError(RuntimeError):
    pass


# -- syntax -----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Prop:
    kind: str  # "input" | "decide"
    process: int
    value: Hashable

    def __post_init__(self):
        if self.kind not in ("input", "decide"):
            raise FormulaError(f"unknown atom kind {self.kind!r}")

    def __str__(self):
        return f"{self.kind}({self.process})={self.value}"


def inp(a: int, v) -> Prop:
    return Prop("input", a, v)


def dec_atom(a: int, v) -> Prop:
    return Prop("decide", a, v)


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Atom(Formula):
    prop: Prop


@dataclass(frozen=True)
class NegAtom(Formula):
    prop: Prop


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class And(Formula):
    args: tuple

    def __init__(self, args: Iterable[Formula] = ()):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Or(Formula):
    args: tuple

    def __init__(self, args: Iterable[Formula] = ()):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class DKnow(Formula):
    group: frozenset
    body: Formula

    def __init__(self, group: Iterable[int], body: Formula):
        g = frozenset(group)
        if not g:
            raise FormulaError("distributed knowledge needs a nonempty group")
        object.__setattr__(self, "group", g)
        object.__setattr__(self, "body", body)


@dataclass(frozen=True)
class Nu(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        if self.var in bound_vars(self.body):
            raise FormulaError(f"variable {self.var} is rebound inside its own fixpoint")


TRUE = And(())
FALSE = Or(())


# Keyed by object identity: structural hashing of large formulas is linear in
# their size.  The stored formula keeps the id from being recycled.
_FREE: dict = {}
_BOUND: dict = {}


def free_vars(phi: Formula) -> frozenset:
    hit = _FREE.get(id(phi))
    if hit is not None and hit[0] is phi:
        return hit[1]
    if isinstance(phi, Var):
        res = frozenset((phi.name,))
    elif isinstance(phi, (And, Or)):
        res = frozenset().union(*(free_vars(a) for a in phi.args))
    elif isinstance(phi, DKnow):
        res = free_vars(phi.body)
    elif isinstance(phi, Nu):
        res = free_vars(phi.body) - {phi.var}
    else:
        res = frozenset()
    _FREE[id(phi)] = (phi, res)
    return res


def bound_vars(phi: Formula) -> frozenset:
    hit = _BOUND.get(id(phi))
    if hit is not None and hit[0] is phi:
        return hit[1]
    if isinstance(phi, (And, Or)):
        res = frozenset().union(*(bound_vars(a) for a in phi.args))
    elif isinstance(phi, DKnow):
        res = bound_vars(phi.body)
    elif isinstance(phi, Nu):
        res = bound_vars(phi.body) | {phi.var}
    else:
        res = frozenset()
    _BOUND[id(phi)] = (phi, res)
    return res


def all_vars(phi: Formula) -> frozenset:
    return free_vars(phi) | bound_vars(phi)


def is_closed(phi: Formula) -> bool:
    return not free_vars(phi)


def is_propositional(phi: Formula) -> bool:
    if isinstance(phi, (Atom, NegAtom)):
        return True
    if isinstance(phi, (And, Or)):
        return all(is_propositional(a) for a in phi.args)
    return False


def negate(phi: Formula) -> Formula:
    """Negation of a propositional formula, pushed to the atoms."""
    if isinstance(phi, Atom):
        return NegAtom(phi.prop)
    if isinstance(phi, NegAtom):
        return Atom(phi.prop)
    if isinstance(phi, And):
        return Or(negate(a) for a in phi.args)
    if isinstance(phi, Or):
        return And(negate(a) for a in phi.args)
    raise FormulaError(f"cannot negate non-propositional formula {to_text(phi)}")


def implies(antecedent: Formula, consequent: Formula) -> Formula:
    if not is_propositional(antecedent):
        raise FormulaError("the antecedent of => must be propositional")
    return Or((negate(antecedent), consequent))


def fresh_var(avoid: Iterable[str], stem: str = "Z") -> str:
    taken = set(avoid)
    for i in itertools.count():
        name = f"{stem}{i}"
        if name not in taken:
            return name


def common_knowledge(group: Iterable[int], psi: Formula) -> Formula:
    """``nu Z. (psi & D{a} Z & ...)`` over the members of the group."""
    g = sorted(frozenset(group))
    if not g:
        raise FormulaError("common knowledge needs a nonempty group")
    z = fresh_var(all_vars(psi))
    return Nu(z, And([psi] + [DKnow({a}, Var(z)) for a in g]))


def subst_free(phi: Formula, name: str, repl: Formula) -> Formula:
    if isinstance(phi, Var):
        return repl if phi.name == name else phi
    if isinstance(phi, And):
        return And(subst_free(a, name, repl) for a in phi.args)
    if isinstance(phi, Or):
        return Or(subst_free(a, name, repl) for a in phi.args)
    if isinstance(phi, DKnow):
        return DKnow(phi.group, subst_free(phi.body, name, repl))
    if isinstance(phi, Nu):
        return phi if phi.var == name else Nu(phi.var, subst_free(phi.body, name, repl))
    return phi


def unfold(phi: Nu) -> Formula:
    """One unfolding ``body[nu Z. body / Z]``."""
    return subst_free(phi.body, phi.var, phi)


def size(phi: Formula) -> int:
    if isinstance(phi, (And, Or)):
        return 1 + sum(size(a) for a in phi.args)
    if isinstance(phi, (DKnow, Nu)):
        return 1 + size(phi.body)
    return 1


# -- rendering ----------------------------------------------------------------

def _group(g) -> str:
    return "{" + ",".join(str(a) for a in sorted(g)) + "}"


def to_text(phi: Formula) -> str:
    """Render in the ASCII grammar accepted by :func:`epimu.parser.parse`."""
    if isinstance(phi, Atom):
        return str(phi.prop)
    if isinstance(phi, NegAtom):
        return f"~{phi.prop}"
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, And):
        if not phi.args:
            return "true"
        return "(" + " & ".join(to_text(a) for a in phi.args) + ")"
    if isinstance(phi, Or):
        if not phi.args:
            return "false"
        return "(" + " | ".join(to_text(a) for a in phi.args) + ")"
    if isinstance(phi, DKnow):
        return f"D{_group(phi.group)} {_atomic_text(phi.body)}"
    if isinstance(phi, Nu):
        return f"(nu {phi.var}. {to_text(phi.body)})"
    raise TypeError(phi)


def _atomic_text(phi):
    s = to_text(phi)
    if isinstance(phi, DKnow):
        return "(" + s + ")"
    return s


def pretty(phi: Formula) -> str:
    """Unicode rendering in the usual notation."""
    if isinstance(phi, Atom):
        return f"{phi.prop.kind}_{phi.prop.process}={phi.prop.value}"
    if isinstance(phi, NegAtom):
        return "¬" + pretty(Atom(phi.prop))
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, And):
        return "⊤" if not phi.args else "(" + " ∧ ".join(pretty(a) for a in phi.args) + ")"
    if isinstance(phi, Or):
        return "⊥" if not phi.args else "(" + " ∨ ".join(pretty(a) for a in phi.args) + ")"
    if isinstance(phi, DKnow):
        return f"D_{_group(phi.group)} {pretty(phi.body)}"
    if isinstance(phi, Nu):
        return f"ν{phi.var}.{pretty(phi.body)}"
    raise TypeError(phi)


# -- models -------------------------------------------------------------------

class SimplicialModel:
    """Kripke model induced by a set of full-colored facets.

    ``states`` are the state names (plain facets, or richer objects such as
    subdivided facets); ``facets`` are the realized vertex sets, one per state.
    Process ``a`` cannot distinguish two states iff they share the vertex of
    color ``a``.
    """

    def __init__(self, facets: Sequence[Iterable], labels: Sequence[Iterable[Prop]],
                 n: int, states: Sequence[Hashable] | None = None, meta: Mapping | None = None):
        self.n = n
        self.facets = tuple(f if isinstance(f, Simplex) else Simplex(f) for f in facets)
        self.states = tuple(states) if states is not None else self.facets
        self.labels = tuple(frozenset(l) for l in labels)
        if not (len(self.facets) == len(self.states) == len(self.labels)):
            raise ValueError("facets, states and labels must have equal length")
        pi = frozenset(range(n + 1))
        for f in self.facets:
            if f.colors != pi:
                raise ValueError(f"facet {f} is not colored by [0,{n}]")
        self.index = {s: i for i, s in enumerate(self.states)}
        if len(self.index) != len(self.states):
            raise ValueError("duplicate states")
        self.meta = dict(meta or {})
        self.full = (1 << len(self.states)) - 1
        self._vertex_of = [dict(f) for f in self.facets]
        self._classes: dict = {}
        self._atom_masks: dict | None = None

    def __len__(self):
        return len(self.states)

    @property
    def processes(self) -> range:
        return range(self.n + 1)

    def vertex(self, i: int, a: int):
        return (a, self._vertex_of[i][a])

    def classes(self, group: Iterable[int]) -> tuple:
        """Equivalence classes of the group relation, as bitmasks."""
        g = tuple(sorted(frozenset(group)))
        if not g:
            raise FormulaError("the group relation is undefined for the empty group")
        got = self._classes.get(g)
        if got is None:
            buckets: dict = {}
            for i, vals in enumerate(self._vertex_of):
                key = tuple(vals[a] for a in g)
                buckets[key] = buckets.get(key, 0) | (1 << i)
            got = self._classes[g] = tuple(buckets.values())
        return got

    def related(self, x, y, group: Iterable[int]) -> bool:
        i, j = self.index[x], self.index[y]
        return all(self._vertex_of[i][a] == self._vertex_of[j][a] for a in group)

    def atom_mask(self, p: Prop) -> int:
        if self._atom_masks is None:
            masks: dict = {}
            for i, lab in enumerate(self.labels):
                for q in lab:
                    masks[q] = masks.get(q, 0) | (1 << i)
            self._atom_masks = masks
        return self._atom_masks.get(p, 0)

    def mask_to_states(self, mask: int) -> frozenset:
        return frozenset(self.states[i] for i in iter_bits(mask))

    def states_to_mask(self, states: Iterable) -> int:
        m = 0
        for s in states:
            m |= 1 << self.index[s]
        return m

    def restrict(self, keep: Iterable[int]) -> "SimplicialModel":
        idx = sorted(set(keep))
        return SimplicialModel([self.facets[i] for i in idx], [self.labels[i] for i in idx],
                               self.n, [self.states[i] for i in idx], self.meta)

    def relabel(self, labels: Sequence[Iterable[Prop]], **meta) -> "SimplicialModel":
        m = SimplicialModel(self.facets, labels, self.n, self.states, {**self.meta, **meta})
        m._classes = self._classes
        return m

    def __eq__(self, other):
        if not isinstance(other, SimplicialModel) or self.n != other.n:
            return False
        mine = {(f, l) for f, l in zip(self.facets, self.labels)}
        theirs = {(f, l) for f, l in zip(other.facets, other.labels)}
        return mine == theirs

    __hash__ = None

    def __repr__(self):
        return f"SimplicialModel(n={self.n}, states={len(self.states)})"


def iter_bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def indist(M: SimplicialModel, a: int) -> frozenset:
    """The pairs of states process ``a`` cannot tell apart."""
    return rel_D(M, {a})


def rel_D(M: SimplicialModel, group: Iterable[int]) -> frozenset:
    """Pairs related for every member of the group (includes the diagonal)."""
    pairs = set()
    for c in M.classes(group):
        members = [M.states[i] for i in iter_bits(c)]
        pairs.update(itertools.product(members, members))
    return frozenset(pairs)


# -- semantics ----------------------------------------------------------------

class _Evaluator:
    def __init__(self, M: SimplicialModel, max_iterations: int | None):
        self.M = M
        self.cap = max_iterations if max_iterations is not None else len(M.states) + 2
        self.closed_cache: dict = {}

    def run(self, phi: Formula, rho: dict) -> int:
        closed = not free_vars(phi)
        if closed:
            got = self.closed_cache.get(id(phi))
            if got is not None:
                return got[1]
        res = self._eval(phi, rho)
        if closed:
            self.closed_cache[id(phi)] = (phi, res)
        return res

    def _eval(self, phi: Formula, rho: dict) -> int:
        M = self.M
        if isinstance(phi, Atom):
            return M.atom_mask(phi.prop)
        if isinstance(phi, NegAtom):
            return M.full & ~M.atom_mask(phi.prop)
        if isinstance(phi, Var):
            try:
                return rho[phi.name]
            except KeyError:
                raise UnboundVariableError(phi.name) from None
        if isinstance(phi, And):
            acc = M.full
            for a in phi.args:
                acc &= self.run(a, rho)
                if not acc:
                    break
            return acc
        if isinstance(phi, Or):
            acc = 0
            for a in phi.args:
                acc |= self.run(a, rho)
                if acc == M.full:
                    break
            return acc
        if isinstance(phi, DKnow):
            body = self.run(phi.body, rho)
            if body == M.full:
                return body
            acc = 0
            for c in M.classes(phi.group):
                if body & c == c:
                    acc |= c
            return acc
        if isinstance(phi, Nu):
            current = M.full
            for _ in range(self.cap):
                nxt = self.run(phi.body, {**rho, phi.var: current})
                if nxt == current:
                    return current
                current = nxt
            raise FixpointDivergenceError(
                f"nu {phi.var} did not stabilize within {self.cap} iterations "
                f"(last size {bin(current).count('1')})")
        raise TypeError(f"not a formula: {phi!r}")


def eval_mask(M: SimplicialModel, phi: Formula, rho: Mapping[str, int] | None = None,
              max_iterations: int | None = None) -> int:
    return _Evaluator(M, max_iterations).run(phi, dict(rho or {}))


def evaluate(M: SimplicialModel, phi: Formula, rho: Mapping[str, Iterable] | None = None) -> frozenset:
    """The set of states satisfying ``phi`` under the interpretation ``rho``.

    ``rho`` maps variable names to sets of states.
    """
    masks = {z: M.states_to_mask(s) for z, s in (rho or {}).items()}
    return M.mask_to_states(eval_mask(M, phi, masks))


def satisfies(M: SimplicialModel, state, phi: Formula) -> bool:
    if state not in M.index:
        raise KeyError(f"state {state!r} is not in the model")
    if not is_closed(phi):
        raise UnboundVariableError(sorted(free_vars(phi)))
    return bool(eval_mask(M, phi) >> M.index[state] & 1)


def valid(M: SimplicialModel, phi: Formula) -> bool:
    return eval_mask(M, phi) == M.full


def counterexamples(M: SimplicialModel, phi: Formula, cap: int | None = None) -> list:
    bad = M.full & ~eval_mask(M, phi)
    out = []
    for i in iter_bits(bad):
        out.append(M.states[i])
        if cap is not None and len(out) >= cap:
            break
    return out


def input_labels(facet: Simplex) -> frozenset:
    return frozenset(inp(a, v) for a, v in facet)


def simplicial_model(facets: Iterable[Iterable], n: int) -> SimplicialModel:
    """The model induced by a complex, labelled by input atoms."""
    fs = sorted((f if isinstance(f, Simplex) else Simplex(f) for f in facets),
                key=lambda f: tuple(vertex_key(v) for v in f.sorted_vertexes()))
    return SimplicialModel(fs, [input_labels(f) for f in fs], n)
