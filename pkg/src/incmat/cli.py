"""Command-line front end.

Exit status: 0 on success, 1 when a verification verdict is ``fail``,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .combinat import N, cascade_decompose, kk_lower_shadow_bound, kk_upper_shadow_min
from .dependence import nullspace
from .experiments import (
    FAIL,
    graph_census,
    kk_oracle,
    resilience_trial,
    rex_oracle,
    sweep_csv,
    threshold_sweep,
    verify_construction,
    verify_gottlieb,
    verify_hamilton,
    verify_R,
    zero_column_threshold,
)
from .hypergraph import (
    Hypergraph,
    complete,
    construct_G,
    construct_R,
    format_hypergraph,
    hamilton_frame,
    random_hypergraph,
    read_hypergraph,
    shadow,
    star_configuration,
)
from .matrix import InclusionMatrix, build_matrix, format_matrix_market, rank, read_matrix_market

THREADS_ENV = "INCMAT_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if value < 1:
            raise UsageError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _probability_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated probabilities, got {text!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="-", help="output path ('-' for stdout)")
    p.add_argument("--threads", type=_positive, default=None)
    p.add_argument("--format", choices=["json", "csv", "matrixmarket", "hypergraph-text"], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="incmat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"incmat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    construct = sub.add_parser("construct", help="emit a named hypergraph in text format")
    kinds = construct.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    specs = {
        "complete": ["n", "r"],
        "star": ["n", "t", "s"],
        "gts": ["n", "t", "r", "s"],
        "R": ["n", "r", "s"],
        "hamilton": ["n", "r"],
        "random": ["n", "r"],
    }
    for kind, keys in specs.items():
        kp = kinds.add_parser(kind)
        for key in keys:
            kp.add_argument(f"--{key}", type=int, required=True)
        if kind == "random":
            kp.add_argument("--p", type=float, required=True)
        _common(kp)

    mp = sub.add_parser("matrix", help="inclusion matrix as MatrixMarket")
    mp.add_argument("--input", default="-")
    mp.add_argument("--s", type=int, required=True)
    _common(mp)

    rp = sub.add_parser("rank", help="rank certificate of an inclusion matrix")
    rp.add_argument("--input", default="-")
    rp.add_argument("--s", type=int, default=None, help="required when the input is a hypergraph")
    rp.add_argument("--mode", choices=["exact", "modular", "certified"], default="exact")
    rp.add_argument("--p", type=int, default=None, help="prime for --mode modular")
    _common(rp)

    np_ = sub.add_parser("nullspace", help="integer kernel basis (dependence sequences)")
    np_.add_argument("--input", default="-")
    np_.add_argument("--s", type=int, default=None)
    np_.add_argument("--method", choices=["auto", "exact", "modular"], default="auto")
    _common(np_)

    sp = sub.add_parser("shadow", help="lower or upper shadow of an edge family")
    sp.add_argument("--input", default="-")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--direction", choices=["lower", "upper"], required=True)
    _common(sp)

    cp = sub.add_parser("cascade", help="k-binomial decomposition")
    cp.add_argument("--m", type=int, required=True)
    cp.add_argument("--k", type=int, required=True)
    _common(cp)

    fp = sub.add_parser("formula", help="closed-form counts")
    fkinds = fp.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for kind, keys in {"N": ["n", "t", "r", "s"], "K": ["n", "m", "k", "p"], "kkbound": ["m", "k", "p"]}.items():
        kp = fkinds.add_parser(kind)
        for key in keys:
            kp.add_argument(f"--{key}", type=int, required=True)
        _common(kp)

    vp = sub.add_parser("verify", help="theorem-level verification drivers")
    vkinds = vp.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for kind, keys in {
        "gottlieb": ["n-max"],
        "construction": ["n", "t", "r", "s"],
        "R": ["n", "r", "s"],
        "hamilton": ["n", "r"],
        "census": ["n"],
        "kk": ["n", "k", "p"],
    }.items():
        kp = vkinds.add_parser(kind)
        for key in keys:
            kp.add_argument(f"--{key}", type=int, required=True)
        _common(kp)

    xp = sub.add_parser("rex", help="brute-force rank-extremal number")
    for key in ["n", "t", "r", "s", "f-cap"]:
        xp.add_argument(f"--{key}", type=int, required=True)
    xp.add_argument("--budget", type=int, default=10**8)
    _common(xp)

    wp = sub.add_parser("sweep", help="random threshold Monte Carlo")
    for key in ["n", "r", "s", "trials"]:
        wp.add_argument(f"--{key}", type=int, required=True)
    grid = wp.add_mutually_exclusive_group(required=True)
    grid.add_argument("--p-grid", type=_probability_list)
    grid.add_argument("--p-multiples", type=_probability_list,
                      help="grid as multiples of s (r-s)! ln n / n^(r-s)")
    _common(wp)

    lp = sub.add_parser("resilience", help="full-rank fraction after random removals")
    for key in ["n", "r", "s", "family-size", "trials"]:
        lp.add_argument(f"--{key}", type=int, required=True)
    lp.add_argument("--degree-cap", type=int, default=None)
    _common(lp)
    return parser


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read --input {path}: {exc.strerror}") from None


def _load_matrix(args) -> InclusionMatrix:
    text = _read_text(args.input)
    if text.startswith("%%MatrixMarket"):
        return read_matrix_market(io.StringIO(text))
    if args.s is None:
        raise UsageError("--s is required when --input is a hypergraph")
    return build_matrix(read_hypergraph(io.StringIO(text)), args.s)


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("output",)}
    return {"tool": "incmat", "version": __version__, **cfg}


def _emit(args, text: str) -> None:
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json(args, result) -> str:
    return json.dumps({"config": _config(args), "result": result}, sort_keys=True, default=str) + "\n"


def _construct(args) -> Hypergraph:
    k = args.kind
    if k == "complete":
        return complete(args.n, args.r)
    if k == "star":
        return Hypergraph.from_edges(args.n, args.s, star_configuration(args.n, args.t, args.s))
    if k == "gts":
        return construct_G(args.n, args.t, args.r, args.s)
    if k == "R":
        return construct_R(args.n, args.r, args.s)
    if k == "hamilton":
        return hamilton_frame(args.n, args.r)
    return random_hypergraph(args.n, args.r, args.p, seed=args.seed)


def _run_verify(args, threads):
    k = args.kind
    if k == "gottlieb":
        return verify_gottlieb(args.n_max)
    if k == "construction":
        return verify_construction(args.n, args.t, args.r, args.s)
    if k == "R":
        return verify_R(args.n, args.r, args.s)
    if k == "hamilton":
        return verify_hamilton(args.n, args.r)
    if k == "census":
        return graph_census(args.n)
    return kk_oracle(args.n, args.k, args.p)


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads = args.threads or default_threads()
        args.threads = threads
        return _dispatch(args, threads)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"incmat {args.command}: error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args, threads: int) -> int:
    cmd = args.command
    if cmd == "construct":
        G = _construct(args)
        if args.format == "json":
            _emit(args, _json(args, {"n": G.n, "r": G.r, "edges": G.edge_lists()}))
        else:
            _emit(args, format_hypergraph(G))
        return 0
    if cmd == "matrix":
        G = read_hypergraph(io.StringIO(_read_text(args.input)))
        _emit(args, format_matrix_market(build_matrix(G, args.s), _config(args)))
        return 0
    if cmd == "rank":
        M = _load_matrix(args)
        cert = rank(M, args.mode, p=args.p, rng=args.seed)
        _emit(args, _json(args, cert.to_dict()))
        return 0
    if cmd == "nullspace":
        M = _load_matrix(args)
        seqs = nullspace(M, args.method, rng=args.seed)
        _emit(args, _json(args, {"n": M.n, "s": M.s, "kernel": [a.to_json() for a in seqs]}))
        return 0
    if cmd == "shadow":
        G = read_hypergraph(io.StringIO(_read_text(args.input)))
        k = G.r - args.p if args.direction == "lower" else G.r + args.p
        out = Hypergraph.from_edges(G.n, k, shadow(G.edges, args.p, args.direction, G.n))
        if args.format == "json":
            _emit(args, _json(args, {"n": out.n, "r": out.r, "edges": out.edge_lists()}))
        else:
            _emit(args, format_hypergraph(out))
        return 0
    if cmd == "cascade":
        dec = cascade_decompose(args.m, args.k)
        _emit(args, _json(args, {"m": dec.m, "k": dec.k, "terms": [list(t) for t in dec.terms]}))
        return 0
    if cmd == "formula":
        if args.kind == "N":
            value = N(args.n, args.t, args.r, args.s)
        elif args.kind == "K":
            value = kk_upper_shadow_min(args.n, args.m, args.k, args.p)
        else:
            value = kk_lower_shadow_bound(args.m, args.k, args.p)
        _emit(args, _json(args, {"value": value}))
        return 0

    if cmd == "verify":
        rep = _run_verify(args, threads)
    elif cmd == "rex":
        rep = rex_oracle(args.n, args.t, args.r, args.s, args.f_cap, args.budget)
    elif cmd == "sweep":
        grid = args.p_grid
        if grid is None:
            base = zero_column_threshold(args.n, args.r, args.s)
            grid = [float(Fraction(m).limit_denominator(10**6)) * base for m in args.p_multiples]
        rep = threshold_sweep(args.n, args.r, args.s, grid, args.trials, args.seed, workers=threads)
    else:
        rep = resilience_trial(
            args.n, args.r, args.s, args.family_size, args.degree_cap, args.trials, args.seed, workers=threads
        )
    if args.format == "csv":
        if cmd != "sweep":
            raise UsageError("--format csv is only available for sweep")
        header = "# config: " + json.dumps(_config(args), sort_keys=True, default=str) + "\n"
        _emit(args, header + sweep_csv(rep))
    else:
        _emit(args, _json(args, rep.to_dict()))
    return 1 if rep.verdict == FAIL else 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
