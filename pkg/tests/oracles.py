"""Independent reference implementations used as test oracles.

These work on plain Python sets and explicit relations and share no
evaluation code with the package.
"""
from itertools import chain, combinations, permutations, product
import random

from epimu.logic import And, Atom, DKnow, NegAtom, Nu, Or, Prop, Var


def indist_pairs(facets, group):
    """Pairs (i, j) whose facets agree on every vertex colored in ``group``."""
    out = set()
    for i, f in enumerate(facets):
        for j, g in enumerate(facets):
            if all(dict(f)[a] == dict(g)[a] for a in group):
                out.add((i, j))
    return out


def naive_eval(facets, labels, phi, env=None):
    env = env or {}
    N = len(facets)
    if isinstance(phi, Atom):
        return {i for i in range(N) if phi.prop in labels[i]}
    if isinstance(phi, NegAtom):
        return {i for i in range(N) if phi.prop not in labels[i]}
    if isinstance(phi, Var):
        return set(env[phi.name])
    if isinstance(phi, And):
        out = set(range(N))
        for a in phi.args:
            out &= naive_eval(facets, labels, a, env)
        return out
    if isinstance(phi, Or):
        out = set()
        for a in phi.args:
            out |= naive_eval(facets, labels, a, env)
        return out
    if isinstance(phi, DKnow):
        body = naive_eval(facets, labels, phi.body, env)
        rel = indist_pairs(facets, phi.group)
        return {i for i in range(N) if all(j in body for (x, j) in rel if x == i)}
    if isinstance(phi, Nu):
        # union of all post-fixpoints, by brute force over subsets
        best = set()
        for r in range(N + 1):
            for S in combinations(range(N), r):
                S = set(S)
                if S <= naive_eval(facets, labels, phi.body, {**env, phi.var: S}):
                    best |= S
        return best
    raise TypeError(phi)


def brute_osp(items):
    """Ordered set partitions via surjections onto 1..r, deduplicated."""
    items = list(items)
    out = set()
    for r in range(1, len(items) + 1):
        for f in product(range(r), repeat=len(items)):
            if set(f) == set(range(r)):
                out.add(tuple(tuple(sorted(x for x, c in zip(items, f) if c == b)) for b in range(r)))
    return out


def random_model(rng: random.Random, n: int, max_states: int, values: int = 3):
    """Distinct random full facets over [0, n] with random atom labels."""
    pool = list(product(range(values), repeat=n + 1))
    rng.shuffle(pool)
    chosen = pool[:rng.randint(1, min(max_states, len(pool)))]
    facets = [frozenset(enumerate(vs)) for vs in chosen]
    props = [Prop("input", a, v) for a in range(n + 1) for v in range(2)]
    labels = [frozenset(p for p in props if rng.random() < 0.5) for _ in chosen]
    return facets, labels, props


def random_formula(rng: random.Random, n: int, props, depth: int, bound=()):
    """Random positive formula with nu binders and free use of bound variables."""
    if depth == 0 or rng.random() < 0.2:
        choices = ["atom", "neg"] + (["var"] if bound else [])
        c = rng.choice(choices)
        if c == "var":
            return Var(rng.choice(bound))
        p = rng.choice(props)
        return Atom(p) if c == "atom" else NegAtom(p)
    c = rng.choice(["and", "or", "d", "nu"])
    if c in ("and", "or"):
        parts = [random_formula(rng, n, props, depth - 1, bound) for _ in range(rng.randint(2, 3))]
        return And(parts) if c == "and" else Or(parts)
    if c == "d":
        group = [a for a in range(n + 1) if rng.random() < 0.5] or [rng.randint(0, n)]
        return DKnow(group, random_formula(rng, n, props, depth - 1, bound))
    name = f"Z{len(bound)}"
    return Nu(name, random_formula(rng, n, props, depth - 1, bound + (name,)))


def all_subsets(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))


def is_simplicial_by_enumeration(f, C_facets, D_facets):
    """Every face of every source facet maps to a face of some target facet."""
    targets = [set(F) for F in D_facets]
    for X in C_facets:
        if any(f(v)[0] != v[0] for v in X):
            return False
        if not any({f(v) for v in X} <= T for T in targets):
            return False
    return True


def permutations_of(n):
    return list(permutations(range(n + 1)))
