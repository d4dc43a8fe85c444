"""Command-line front end.

Exit codes: 0 success, 2 unparseable input or arguments, 3 domain errors
(unknown node, not an edge, degree mismatch), 4 unsupported regime or a
violated degree bound, 5 unknown experiment strategy.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import adversarial, kernels
from .emd import (
    MpmctInstance,
    curvature_avg,
    curvature_edge,
    curvature_node,
    edge_curvatures,
    emd_transport,
)
from .errors import (
    DomainError,
    MalformedInput,
    PreconditionViolation,
    RicciError,
    UnsupportedRegime,
)
from .graph import local_bipartite, read_edge_list
from .local import approx_edge
from .matching import BACKENDS
from .oracle import GraphSession
from .reduction import pad_to_equal, padded_emd, realize_as_graph
from .sampling import EstimatorConfig, estimate_avg_curvature, estimate_node_curvature

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_REGIME = 4
EXIT_STRATEGY = 5

EDGE_MODES = {"equal-a": "a", "equal-b": "b", "unequal": "b"}
MODES = ("equal-a", "equal-b", "unequal", "node", "avg")


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def dec(x) -> str:
    return f"{float(x):.12g}"


def positive_fraction(text: str) -> Fraction:
    try:
        x = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if x <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return x


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default=None)

    p = _Parser(prog="ricci", description="Ollivier-Ricci curvature of graph edges, nodes and graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    cur = sub.add_parser("curvature", parents=[common], help="exact curvature")
    cur.add_argument("target", choices=("edge", "node", "graph"))
    cur.add_argument("--input", required=True)
    cur.add_argument("--u")
    cur.add_argument("--v")

    ap = sub.add_parser("approx", parents=[common], help="query-based approximation")
    ap.add_argument("target", choices=("edge", "node", "avg"))
    ap.add_argument("--input", required=True)
    ap.add_argument("--u")
    ap.add_argument("--v")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--eps", type=positive_fraction, default=Fraction(1, 10))
    ap.add_argument("--delta", type=positive_fraction, default=Fraction(1, 10))
    ap.add_argument("--r", type=positive_fraction, default=Fraction(1, 5))
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--backend", choices=BACKENDS, default="exact")

    ex = sub.add_parser("experiment", parents=[common], help="lower-bound query experiment")
    ex.add_argument("--strategy", required=True)
    ex.add_argument("--family", choices=tuple(adversarial.MIXES), default="single_light")
    ex.add_argument("--trials", type=int, default=200)
    ex.add_argument("--n", type=int, default=20)
    ex.add_argument("--output")

    red = sub.add_parser("reduce", parents=[common], help="padding and realization utilities")
    red.add_argument("target", choices=("pad", "realize"))
    red.add_argument("--input", required=True,
                     help="edge list (pad) or whitespace-separated weight matrix (realize)")
    red.add_argument("--u")
    red.add_argument("--v")

    sub.add_parser("info", help="show the active kernel backend")
    return p


def _seed(args) -> int:
    env = os.environ.get("RICCI_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise MalformedInput(f"RICCI_SEED is not an integer: {env!r}") from None
    return args.seed


def _need(args, *names) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise MalformedInput(f"missing required option(s): {', '.join(missing)}")


def _emit(payload: dict, fmt_: str, rows=None, columns=None) -> str:
    if fmt_ == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows is None:
            flat = {k: v for k, v in payload.items() if not isinstance(v, (dict, list))}
            for k, v in payload.items():
                if isinstance(v, dict):
                    flat.update({f"{k}.{kk}": vv for kk, vv in v.items()})
            columns, rows = list(flat), [list(flat.values())]
        w.writerow(columns)
        w.writerows(rows)
        return buf.getvalue()
    return json.dumps(payload, indent=2) + "\n"


def cmd_curvature(args) -> str:
    g = read_edge_list(args.input)
    fmt_ = args.format or "json"
    if args.target == "edge":
        _need(args, "u", "v")
        c = curvature_edge(g, args.u, args.v)
        res = emd_transport(local_bipartite(g, args.u, args.v))
        payload = {"command": "curvature edge", "u": str(args.u), "v": str(args.v),
                   "curvature": fmt(c), "curvature_decimal": dec(c),
                   "emd": fmt(res.value), "method": res.method}
        return _emit(payload, fmt_)
    if args.target == "node":
        _need(args, "v")
        c = curvature_node(g, args.v)
        payload = {"command": "curvature node", "v": str(args.v), "degree": g.degree(args.v),
                   "curvature": fmt(c), "curvature_decimal": dec(c)}
        return _emit(payload, fmt_)
    per_edge = edge_curvatures(g)
    avg = curvature_avg(g)
    if fmt_ == "csv":
        rows = [[a, b, fmt(c), dec(c)] for (a, b), c in per_edge.items()]
        return _emit({}, "csv", rows, ["u", "v", "curvature", "curvature_decimal"])
    payload = {"command": "curvature graph", "nodes": g.number_of_nodes(),
               "edges": g.number_of_edges(), "avg": fmt(avg), "avg_decimal": dec(avg)}
    return _emit(payload, fmt_)


def _exact_black_box(g):
    cache = {}

    def box(x, y):
        key = frozenset((str(x), str(y)))
        if key not in cache:
            cache[key] = curvature_edge(g, x, y)
        return cache[key]

    return box


def cmd_approx(args) -> str:
    g = read_edge_list(args.input)
    seed = _seed(args)
    fmt_ = args.format or "json"
    mode = args.mode
    if args.target == "edge":
        mode = mode or "equal-b"
        if mode not in EDGE_MODES:
            raise MalformedInput(f"mode {mode!r} does not apply to edges")
        _need(args, "u", "v")
        if mode != "unequal" and g.degree(args.u) != g.degree(args.v):
            raise DomainError(f"mode {mode} needs deg(u) == deg(v); use --mode unequal")
        res = approx_edge(g, args.u, args.v, variant=EDGE_MODES[mode], eps=args.eps,
                          delta=args.delta, d=args.d, backend=args.backend, rng=seed)
        payload = {"command": "approx edge", "mode": mode, "u": str(args.u), "v": str(args.v),
                   "estimate": fmt(res.estimate), "estimate_decimal": dec(res.estimate),
                   "guarantee": fmt(res.guarantee), "side": res.side,
                   "delta_hat": fmt(res.delta_hat), "case": res.case,
                   "backend": args.backend, "seed": seed, "queries": res.queries}
        return _emit(payload, fmt_)
    if mode is not None and mode != args.target:
        raise MalformedInput(f"mode {mode!r} does not match target {args.target!r}")
    cfg = EstimatorConfig.for_radius(args.r, seed)
    session = GraphSession(g, seed)
    box = _exact_black_box(g)
    if args.target == "node":
        _need(args, "v")
        est = estimate_node_curvature(session, args.v, cfg, box)
        extra = {"v": str(args.v)}
    else:
        est = estimate_avg_curvature(session, g.degrees(), cfg, box)
        extra = {}
    payload = {"command": f"approx {args.target}", "mode": args.target, **extra,
               "estimate": fmt(est), "estimate_decimal": dec(est),
               "guarantee": fmt(2 * cfg.r), "r": fmt(cfg.r), "k": cfg.k, "seed": seed,
               "queries": session.counters.as_dict()}
    return _emit(payload, fmt_)


def cmd_experiment(args) -> str:
    report = adversarial.run_experiment(args.strategy, args.family, args.trials, _seed(args), args.n)
    if (args.format or "csv") == "csv":
        out = report.to_csv()
    else:
        out = json.dumps({"command": "experiment", "summary": report.summary(),
                          "records": [r.__dict__ for r in report.records]}, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
        return ""
    return out


def _read_matrix(path) -> MpmctInstance:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            text = line.strip()
            if text and not text.startswith("#"):
                try:
                    rows.append([int(t) for t in text.replace(",", " ").split()])
                except ValueError:
                    raise MalformedInput(f"non-integer entry in {text!r}") from None
    if len({len(r) for r in rows}) > 1:
        raise MalformedInput("ragged weight matrix")
    return MpmctInstance.from_matrix(np.array(rows, dtype=np.int64) if rows else [])


def cmd_reduce(args) -> str:
    fmt_ = args.format or "json"
    if args.target == "pad":
        _need(args, "u", "v")
        g = read_edge_list(args.input)
        base = local_bipartite(g, args.u, args.v)
        p = pad_to_equal(base)
        emd = emd_transport(base).value
        pe = padded_emd(p)
        if fmt_ == "csv":
            rows = [[lab] + [int(w) for w in row] for lab, row in zip(p.left_expanded, p.weight)]
            return _emit({}, "csv", rows, ["left"] + list(p.right))
        payload = {"command": "reduce pad", "u": base.u, "v": base.v, "a": p.a, "b": p.b,
                   "left": list(p.left_expanded), "right": list(p.right),
                   "weight": [[int(w) for w in row] for row in p.weight],
                   "emd": fmt(emd), "padded_emd": fmt(pe), "gap_bound": fmt(p.gap_bound())}
        return _emit(payload, fmt_)
    h = _read_matrix(args.input)
    g, (u, v) = realize_as_graph(h)
    edges = [list(e) for e in g.edges()]
    if fmt_ == "csv":
        return _emit({}, "csv", edges, ["source", "target"])
    return _emit({"command": "reduce realize", "u": u, "v": v, "nodes": g.number_of_nodes(),
                  "edges": edges}, fmt_)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "experiment" and args.strategy not in adversarial.STRATEGIES:
        print(f"ricci: unknown strategy {args.strategy!r}; choose from "
              f"{', '.join(adversarial.STRATEGIES)}", file=sys.stderr)
        return EXIT_STRATEGY
    handlers = {"curvature": cmd_curvature, "approx": cmd_approx,
                "experiment": cmd_experiment, "reduce": cmd_reduce}
    try:
        if args.command == "info":
            out = json.dumps({"command": "info", "backend": kernels.BACKEND}) + "\n"
        else:
            out = handlers[args.command](args)
    except (MalformedInput, OSError) as exc:
        print(f"ricci: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"ricci: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (UnsupportedRegime, PreconditionViolation) as exc:
        print(f"ricci: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except RicciError as exc:
        print(f"ricci: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
