"""Command-line front end.

Verbs: ``build``, ``check``, ``solve``, ``witness``, ``sperner``, ``export``.
Exit codes: 0 when a command completes (whatever its verdict), 2 when a
resource limit is hit, 3 on bad input.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from pathlib import Path

from . import __version__
from . import formulas as F
from .logic import FormulaError, counterexamples, eval_mask, simplicial_model
from .models import (DEFAULT_STATE_LIMIT, StateLimitError, input_complex, k_concurrency_model,
                     protocol_model_iis, pullback, task_model_sak, three_facet_model)
from .obstruction import (NonSpernerColoringError, random_sperner_coloring, sperner_odd_count,
                          sperner_vertexes, witness_path)
from .parser import ParseError, parse
from .serialize import SerializationError, encode_value, from_json, to_dot, to_json, to_text
from .solvability import (SearchLimitError, SearchStats, decide_by, knowledge_gain_failures,
                          search_morphism)
from .subdivision import PreconditionError, carrier_colors, own_input

log = logging.getLogger("epimu")

EXIT_OK, EXIT_LIMIT, EXIT_INPUT = 0, 2, 3
MODELS = ("input", "sak", "sak-fc", "iis", "rk", "three-facet")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _config(args) -> dict:
    skip = {"func", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _report(args, body: dict, timing: float) -> dict:
    return {"command": args.command, "config": _config(args), "seed": args.seed,
            "version": __version__, **body, "timing": {"seconds": round(timing, 3)}}


def _emit(args, report: dict, text_lines: list):
    if args.format == "json":
        out = json.dumps(report, indent=1, sort_keys=True, default=str)
    else:
        head = f"epimu {__version__} {args.command} seed={args.seed} config=" + json.dumps(
            report["config"], sort_keys=True, default=str)
        out = "\n".join([head] + text_lines + [f"time: {report['timing']['seconds']}s"])
    print(out)


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- model construction ------------------------------------------------------------------

def _k_conc(args) -> int:
    return args.k_conc if args.k_conc is not None else args.k


def build_model(args):
    if args.model_file:
        try:
            return from_json(Path(args.model_file).read_text())
        except OSError as e:
            raise InputError(f"cannot read {args.model_file}: {e}") from None
    n, kind = args.n, args.model
    if kind == "input":
        return simplicial_model(input_complex(n).facets, n)
    if kind == "sak":
        return task_model_sak(n, args.k).plain
    if kind == "sak-fc":
        return task_model_sak(n, args.k).model
    if kind == "iis":
        return protocol_model_iis(n, args.m, args.limit).model
    if kind == "rk":
        return k_concurrency_model(n, _k_conc(args), args.limit).model
    if kind == "three-facet":
        return three_facet_model()
    raise InputError(f"unknown model {kind!r}")


def load_formula(args):
    sel = args.formula
    if sel is None:
        raise InputError("--formula is required")
    k = args.k_param if args.k_param is not None else args.k
    if sel.startswith("@"):
        try:
            sel = Path(sel[1:]).read_text()
        except OSError as e:
            raise InputError(f"cannot read formula file: {e}") from None
    elif sel in F.NAMED:
        return F.named(sel, args.n, k)
    return parse(sel)


def build_protocol(args):
    if args.protocol == "rk":
        return k_concurrency_model(args.n, args.k_conc if args.k_conc is not None else args.n + 1,
                                   args.limit)
    return protocol_model_iis(args.n, args.m, args.limit)


_RULES = {
    "own": lambda rng: (lambda v, dom: own_input(v)),
    "min": lambda rng: (lambda v, dom: min(dom)),
    "max": lambda rng: (lambda v, dom: max(dom)),
    "random": lambda rng: (lambda v, dom: rng.choice(dom)),
}


# -- verbs ------------------------------------------------------------------------------------

def cmd_build(args) -> int:
    t = time.perf_counter()
    M = build_model(args)
    rel = {str(a): sum(bin(c).count("1") * (bin(c).count("1") - 1) // 2 for c in M.classes({a}))
           for a in M.processes}
    if args.out:
        _write(args.out, _render_model(M, args.out_format))
    body = {"states": len(M), "relations": rel, "kind": M.meta.get("kind")}
    _emit(args, _report(args, body, time.perf_counter() - t),
          [f"model: {M.meta.get('kind')}", f"states: {len(M)}",
           "indistinguishable pairs: " + ", ".join(f"{a}:{c}" for a, c in rel.items())])
    return EXIT_OK


def cmd_check(args) -> int:
    t = time.perf_counter()
    M = build_model(args)
    phi = load_formula(args)
    cex = counterexamples(M, phi, args.cap)
    holds = eval_mask(M, phi)
    n_fail = len(M) - bin(holds).count("1")
    body = {"formula": str(phi) if len(str(phi)) <= 400 else f"{str(phi)[:400]}...",
            "states": len(M), "valid": n_fail == 0, "failing": n_fail,
            "counterexamples": [str(s) for s in cex]}
    lines = [f"states: {len(M)}", f"verdict: {'VALID' if n_fail == 0 else 'INVALID'}"]
    if n_fail:
        lines.append(f"failing states: {n_fail}")
        lines += [f"  {s}" for s in body["counterexamples"]]
    _emit(args, _report(args, body, time.perf_counter() - t), lines)
    return EXIT_OK


def morphism_document(delta) -> dict:
    return {"decisions": [{"vertex": [v[0], encode_value(v[1])], "decide": d}
                          for v, d in delta.assignment.items()]}


def cmd_solve(args) -> int:
    t = time.perf_counter()
    P = build_protocol(args)
    T = task_model_sak(args.n, args.k)
    stats = SearchStats()
    try:
        delta = search_morphism(P, T, node_limit=args.node_limit, stats=stats)
    except SearchLimitError as e:
        body = {"verdict": "LIMIT", "detail": str(e), "search": vars(stats)}
        _emit(args, _report(args, body, time.perf_counter() - t), ["verdict: LIMIT", str(e)])
        return EXIT_LIMIT
    body = {"verdict": "UNSOLVABLE" if delta is None else "SOLVABLE", "protocol": P.kind,
            "states": len(P), "search": vars(stats)}
    lines = [f"protocol: {P.kind} ({len(P)} states)", f"verdict: {body['verdict']}",
             f"search: {stats.nodes} nodes, {stats.restarts} restarts, exhaustive={stats.exhaustive}"]
    if delta is not None:
        gains = {}
        for name in F.NAMED:
            gains[name] = not knowledge_gain_failures(delta, F.named(name, args.n, args.k))
        pulled = pullback(P, delta)
        body["knowledge_gain"] = gains
        body["phi_valid_on_pullback"] = eval_mask(pulled, F.phi(args.n, args.k)) == pulled.full
        lines.append("knowledge gain: " + ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in gains.items()))
        lines.append(f"phi valid on pull-back: {body['phi_valid_on_pullback']}")
        if args.out:
            _write(args.out, json.dumps(morphism_document(delta), sort_keys=True) + "\n")
    _emit(args, _report(args, body, time.perf_counter() - t), lines)
    return EXIT_OK


def cmd_witness(args) -> int:
    t = time.perf_counter()
    P = build_protocol(args)
    T = task_model_sak(args.n, args.k)
    rng = random.Random(args.seed)
    delta = decide_by(P, T, _RULES[args.delta](rng))
    M = pullback(P, delta)
    rep = witness_path(M, args.k, P.m, max_len=args.max_len)
    body = {"candidate": args.delta, "path": rep.to_dict()}
    lines = [f"candidate decision map: {args.delta}", f"mode: {rep.mode}", f"length: {len(rep.path)}",
             f"detail: {rep.detail}", f"fixpoint formula at start: {rep.phi_at_start}"]
    lines += [f"  {s}" + (f"  via {sorted(A)}" if i < len(rep.groups) else "")
              for i, (s, A) in enumerate(zip(rep.path, rep.groups + [None]))]
    _emit(args, _report(args, body, time.perf_counter() - t), lines)
    return EXIT_OK


def cmd_sperner(args) -> int:
    t = time.perf_counter()
    rng = random.Random(args.seed)
    counts = []
    for _ in range(args.samples):
        if args.coloring == "random":
            col = random_sperner_coloring(args.n, args.m, rng)
        else:
            pick = min if args.coloring == "min" else max
            col = {v: pick(carrier_colors(v)) for v in sperner_vertexes(args.n, args.m)}
        counts.append(sperner_odd_count(args.n, args.m, col))
    odd = all(c % 2 for c in counts)
    body = {"samples": len(counts), "all_odd": odd, "counts": sorted(set(counts))}
    _emit(args, _report(args, body, time.perf_counter() - t),
          [f"samples: {len(counts)}", f"fully colored counts seen: {body['counts']}", f"all odd: {odd}"])
    return EXIT_OK


def _render_model(M, fmt: str) -> str:
    if fmt == "json":
        return to_json(M) + "\n"
    if fmt == "dot":
        names = list(M.states) if all(isinstance(s, str) for s in M.states) else None
        return to_dot(M, names)
    return to_text(M, limit=None)


def cmd_export(args) -> int:
    M = build_model(args)
    _write(args.out, _render_model(M, args.format))
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1, help="processes are 0..n")
    common.add_argument("--k", type=int, default=1, help="agreement parameter")
    common.add_argument("--m", type=int, default=1, help="number of rounds")
    common.add_argument("--limit", type=int, default=DEFAULT_STATE_LIMIT, help="state-count limit")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output file for models or morphisms")
    common.add_argument("-v", "--verbose", action="store_true")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", choices=MODELS, default="iis")
    model.add_argument("--model-file", help="read the model from a JSON document")
    model.add_argument("--k-conc", type=int, help="concurrency bound for the rk model")

    proto = argparse.ArgumentParser(add_help=False)
    proto.add_argument("--protocol", choices=("iis", "rk"), default="iis")
    proto.add_argument("--k-conc", type=int, help="concurrency bound for --protocol rk")

    p = _Parser(prog="epimu", description="Epistemic model checking of set agreement.")
    p.add_argument("--version", action="version", version=f"epimu {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common, model], help="build a model and report its size")
    b.add_argument("--out-format", choices=("json", "dot", "text"), default="json")
    b.add_argument("--format", choices=("text", "json"), default="text")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", parents=[common, model], help="model-check a formula")
    c.add_argument("--formula", required=True, help="name, @file, or formula text")
    c.add_argument("--k-param", type=int, help="k used by named formulas (default --k)")
    c.add_argument("--cap", type=int, default=5, help="counterexamples to list")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("solve", parents=[common, proto], help="search for a decision map")
    s.add_argument("--node-limit", type=int, help="abort the search after this many nodes")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("witness", parents=[common, proto], help="walk the bowtie path for a candidate map")
    w.add_argument("--delta", choices=sorted(_RULES), default="own")
    w.add_argument("--max-len", type=int)
    w.add_argument("--format", choices=("text", "json"), default="text")
    w.set_defaults(func=cmd_witness)

    sp = sub.add_parser("sperner", parents=[common], help="count fully colored facets")
    sp.add_argument("--coloring", choices=("random", "min", "max"), default="random")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_sperner)

    e = sub.add_parser("export", parents=[common, model], help="write a model as JSON, DOT or text")
    e.add_argument("--format", choices=("dot", "json", "text"), default="dot")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.limit <= 0:
        print("epimu: error: --limit must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (StateLimitError, SearchLimitError) as e:
        print(f"epimu: resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except ParseError as e:
        print(f"epimu: parse error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, FormulaError, SerializationError, PreconditionError,
            NonSpernerColoringError, ValueError, KeyError) as e:
        print(f"epimu: input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
