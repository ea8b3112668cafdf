"""Command-line entry point.

Exit statuses: 0 success, 2 unreadable or invalid input, 3 size cap exceeded,
4 audit failure, 5 internal error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, graphs, io, render, witness
from .cycles import exact_minimal, local_search_minimal
from .errors import ParseError, SizeCapError
from .feasibility import FeasibilitySystem
from .verify import audit_cycle, verify_theorem

EXIT_OK, EXIT_PARSE, EXIT_CAP, EXIT_AUDIT, EXIT_INTERNAL = 0, 2, 3, 4, 5

BUILDERS = {
    "gabriel": lambda s, k: graphs.build_k_gabriel(s, 0),
    "kgg": graphs.build_k_gabriel,
    "krng": graphs.build_k_rng,
    "kdg": graphs.build_k_delaunay,
}


class InputError(Exception):
    pass


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _read_points(path):
    text = _read(path)
    try:
        s, labels = io.parse_pointset(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return s, labels, text


def _emit(text: str, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        io.write_atomic(output, text)


def cmd_build(args) -> int:
    if args.k < 0:
        raise InputError("k must be non-negative")
    s, _, _ = _read_points(args.input)
    g = BUILDERS[args.graph](s, args.k)
    _emit(io.emit_graph(g), args.output)
    return EXIT_OK


def cmd_mincycle(args) -> int:
    s, _, _ = _read_points(args.input)
    if args.mode == "exact":
        c = exact_minimal(s).cycle
    else:
        c = local_search_minimal(s, args.seed)
    _emit(io.emit_cycle(c, s), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    s, _, text = _read_points(args.input)
    if args.cycle:
        c = io.parse_cycle(_read(args.cycle), s)
        audit = audit_cycle(s, c, "given", args.k, args.tol)
    else:
        audit = verify_theorem(s, args.mode, args.seed, args.k, args.tol)
    if args.output:
        io.write_atomic(args.output, io.emit_audit(audit, text))
    verdict = "PASS" if audit.passed else "FAIL"
    print(f"{verdict}: n={s.n} edges={len(audit.edges)} max_kappa={audit.max_kappa} k={args.k}")
    for e in audit.failures():
        why = []
        if not e.in_k_gabriel:
            why.append(f"kappa {e.kappa} > {args.k}")
        for fam, chk in e.inequalities.violations():
            why.append(f"inequality {fam} fails at {chk.indices}")
        if not e.packing_ok:
            why.append("packing witness fails")
        print(f"  edge {e.edge}: " + "; ".join(why))
    return EXIT_OK if audit.passed else EXIT_AUDIT


def cmd_render(args) -> int:
    s, labels, _ = _read_points(args.input)
    edges = io.parse_graph(_read(args.graph), s).edges if args.graph else ()
    cycle = io.parse_cycle(_read(args.cycle), s) if args.cycle else None
    try:
        circles = render.parse_circles(args.circles) if args.circles else []
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for i, j in circles:
        if not (0 <= i < s.n and 0 <= j < s.n) or i == j:
            raise InputError(f"circle ({i},{j}) is not a pair of distinct point indices")
    _emit(render.render_svg(s, edges, cycle, circles, labels if args.labels else None), args.output)
    return EXIT_OK


def cmd_search(args) -> int:
    rep = witness.random_search(args.trials, args.n, args.gen, args.seed, args.threads)
    w = rep.best
    print(f"max kappa {w.kappa} at trial {w.trial} edge {w.edge}; failed trials: {len(rep.failed_trials)}")
    if args.store:
        claim = f"max edge kappa {w.kappa} over {args.trials} {args.gen} trials of n={args.n}"
        path = io.store_witness(args.store, w, claim)
        print(f"stored {path}")
    return EXIT_AUDIT if rep.failed_trials else EXIT_OK


def cmd_feas(args) -> int:
    if args.kappa < 1:
        raise InputError("kappa must be positive")
    res = witness.search_feasible(args.kappa, args.restarts, args.seed)
    _emit(io.emit_feasibility(FeasibilitySystem(args.kappa), res), args.output)
    print(f"kappa={args.kappa} max_residual={res.max_residual:.3e} start={res.start} runs={res.restarts_run}",
          file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="proxigraph", description="Proximity graphs and minimal Hamiltonian cycles.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a proximity graph")
    b.add_argument("--graph", choices=sorted(BUILDERS), required=True)
    b.add_argument("--k", type=int, default=0)
    b.add_argument("--input", required=True)
    b.add_argument("--output")
    b.set_defaults(func=cmd_build)

    m = sub.add_parser("mincycle", help="minimal Hamiltonian cycle")
    m.add_argument("--mode", choices=["exact", "local"], default="exact")
    m.add_argument("--input", required=True)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--output")
    m.set_defaults(func=cmd_mincycle)

    v = sub.add_parser("verify", help="audit every edge of a minimal cycle")
    v.add_argument("--input", required=True)
    v.add_argument("--cycle", help="audit this cycle instead of computing one")
    v.add_argument("--mode", choices=["exact", "local"], default="exact")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--k", type=int, default=10)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--output", help="audit file")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="draw an SVG figure")
    r.add_argument("--input", required=True)
    r.add_argument("--graph")
    r.add_argument("--cycle")
    r.add_argument("--circles", help='diameter circles, e.g. "(0,1) (2,3)"')
    r.add_argument("--labels", action="store_true", help="draw point labels from the input file")
    r.add_argument("--output")
    r.set_defaults(func=cmd_render)

    s = sub.add_parser("search", help="random search for high-kappa edges")
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--gen", choices=list(witness.GENERATORS), default="uniform")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int)
    s.add_argument("--store", help="witness store directory")
    s.set_defaults(func=cmd_search)

    f = sub.add_parser("feas", help="search the quadratic feasibility system")
    f.add_argument("--kappa", type=int, required=True)
    f.add_argument("--restarts", type=int, default=64)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--output")
    f.set_defaults(func=cmd_feas)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
