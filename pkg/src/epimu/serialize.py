"""JSON and DOT encodings of simplicial models.

JSON layout::

    {"states": [{"id", "base", "history", "atoms", "vertexes"}, ...],
     "relations": {"0": [[i, j], ...], ...},
     "meta": {...}}

Vertex values are encoded as plain ints, ``{"pair": [x, y]}`` for
input/output product vertexes, or ``{"view": [[color, value], ...]}`` for
snapshot views.  Relations list the unordered pairs ``i < j`` of distinct
states that a process cannot tell apart; they are redundant with the
vertexes and are checked on import.
"""
from __future__ import annotations

import json
import re
from itertools import combinations
from typing import Any

from .logic import Prop, SimplicialModel, iter_bits
from .models import TaskState
from .simplicial import Simplex
from .subdivision import OSP, SubdividedFacet


class SerializationError(ValueError):
    pass


def encode_value(v) -> Any:
    if isinstance(v, Simplex):
        return {"view": [[a, encode_value(w)] for a, w in v.sorted_vertexes()]}
    if isinstance(v, tuple):
        return {"pair": [encode_value(x) for x in v]}
    if isinstance(v, bool) or not isinstance(v, int):
        raise SerializationError(f"cannot encode vertex value {v!r}")
    return v


def decode_value(obj) -> Any:
    if isinstance(obj, dict):
        if "view" in obj:
            return Simplex((a, decode_value(w)) for a, w in obj["view"])
        if "pair" in obj:
            return tuple(decode_value(x) for x in obj["pair"])
        raise SerializationError(f"unknown value encoding {obj!r}")
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SerializationError(f"cannot decode vertex value {obj!r}")
    return obj


def encode_simplex(s: Simplex) -> list:
    return [[a, encode_value(v)] for a, v in s.sorted_vertexes()]


def decode_simplex(obj) -> Simplex:
    try:
        return Simplex((a, decode_value(v)) for a, v in obj)
    except (TypeError, ValueError) as e:
        raise SerializationError(f"bad simplex {obj!r}: {e}") from None


_ATOM = re.compile(r"(input|decide)\((\d+)\)=(-?\d+)")


def parse_atom(text: str) -> Prop:
    m = _ATOM.fullmatch(text.replace(" ", ""))
    if not m:
        raise SerializationError(f"bad atom {text!r}")
    return Prop(m.group(1), int(m.group(2)), int(m.group(3)))


def relation_pairs(M: SimplicialModel, a: int) -> list:
    out = []
    for cls in M.classes({a}):
        out.extend(combinations(list(iter_bits(cls)), 2))
    return sorted(out)


def _state_entry(M: SimplicialModel, i: int) -> dict:
    s = M.states[i]
    entry = {"id": i, "base": None, "history": [],
             "atoms": sorted(str(p) for p in M.labels[i]),
             "vertexes": encode_simplex(M.facets[i])}
    if isinstance(s, SubdividedFacet):
        entry["base"] = encode_simplex(s.base)
        entry["history"] = [str(g) for g in s.history]
    elif isinstance(s, str):
        entry["name"] = s
    elif isinstance(s, TaskState):
        entry["base"] = [[a, v] for a, v in enumerate(s.inputs)]
        entry["outputs"] = list(s.outputs)
    return entry


def model_to_dict(M: SimplicialModel) -> dict:
    meta = {"n": M.n}
    meta.update({k: v for k, v in M.meta.items() if isinstance(v, (int, str, float, bool)) or v is None})
    return {"states": [_state_entry(M, i) for i in range(len(M))],
            "relations": {str(a): [list(p) for p in relation_pairs(M, a)] for a in M.processes},
            "meta": meta}


def to_json(M: SimplicialModel, indent: int | None = 1) -> str:
    return json.dumps(model_to_dict(M), indent=indent, sort_keys=True)


def _decode_state(entry: dict, facet: Simplex):
    if entry.get("history"):
        base = decode_simplex(entry["base"])
        return SubdividedFacet(base, tuple(OSP.parse(g) for g in entry["history"]), facet)
    if "name" in entry:
        return str(entry["name"])
    if "outputs" in entry:
        return TaskState(tuple(v for _, v in sorted(entry["base"])), tuple(entry["outputs"]))
    return facet


def model_from_dict(obj: dict, check_relations: bool = True) -> SimplicialModel:
    try:
        meta = dict(obj["meta"])
        n = int(meta["n"])
        entries = sorted(obj["states"], key=lambda e: e["id"])
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationError(f"malformed model document: {e}") from None
    if [e["id"] for e in entries] != list(range(len(entries))):
        raise SerializationError("state ids must be 0..N-1")
    facets = [decode_simplex(e["vertexes"]) for e in entries]
    labels = [frozenset(parse_atom(t) for t in e["atoms"]) for e in entries]
    states = [_decode_state(e, f) for e, f in zip(entries, facets)]
    try:
        M = SimplicialModel(facets, labels, n, states, meta)
    except ValueError as e:
        raise SerializationError(str(e)) from None
    if check_relations and "relations" in obj:
        for a in M.processes:
            got = sorted(tuple(p) for p in obj["relations"].get(str(a), []))
            if got != relation_pairs(M, a):
                raise SerializationError(f"relation of process {a} disagrees with the vertexes")
    return M


def from_json(text: str) -> SimplicialModel:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SerializationError(f"invalid JSON: {e}") from None
    return model_from_dict(obj)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(M: SimplicialModel, names: list | None = None) -> str:
    """Undirected graph: one node per state, one edge per related pair.

    Parallel edges are merged into a single edge labelled with the
    comma-separated processes; self-loops are not drawn.
    """
    lines = ["graph model {"]
    for i in range(len(M)):
        atoms = sorted(str(p) for p in M.labels[i])
        head = [str(names[i])] if names else []
        label = "\\n".join(_dot_escape(t) for t in head + atoms)
        lines.append(f'  s{i} [label="{label}"];')
    edges: dict = {}
    for a in M.processes:
        for i, j in relation_pairs(M, a):
            edges.setdefault((i, j), []).append(a)
    for (i, j), procs in sorted(edges.items()):
        lines.append(f'  s{i} -- s{j} [label="{",".join(map(str, procs))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_text(M: SimplicialModel, limit: int | None = 20) -> str:
    lines = [f"{len(M)} states, n={M.n}, kind={M.meta.get('kind', '?')}"]
    for a in M.processes:
        lines.append(f"  process {a}: {len(relation_pairs(M, a))} indistinguishable pairs")
    for i, s in enumerate(M.states[:limit] if limit else M.states):
        lines.append(f"  s{i} {s}  " + " ".join(sorted(str(p) for p in M.labels[i])))
    if limit and len(M) > limit:
        lines.append(f"  ... {len(M) - limit} more")
    return "\n".join(lines) + "\n"
