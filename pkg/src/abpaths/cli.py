"""Command-line interface.

Exit codes: 0 success, 2 parse error, 3 input rejected (validation,
nonplanar, noncubic), 4 well-formed but no result (infeasible, index out of
range, work limit), 5 internal inconsistency.

Flags may also be given in a config file (``--config FILE``) holding
``key value`` lines with the flag names (e.g. ``threads 4``); explicit
command-line flags win.  ABPATHS_THREADS sets the default worker count.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from .errors import (
    AbpathsError,
    InfeasibleError,
    InternalInconsistencyError,
    NonCubicError,
    NonPlanarError,
    ParseError,
    ValidationError,
    WitnessIndexError,
    WorkLimitExceededError,
)
from .gadget import build_gadget_graph
from .generate import random_instance
from .graphs import planar_embed, validate
from .hardness import mis_via_solver, reduce_mis
from .instancefile import format_instance, format_result, parse_instance
from .normalize import normalize_to_cubic
from .oracle import count_pm_brute, enumerate_solutions, max_independent_sets
from .solver import sample, solve_report, witness

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_NO_RESULT = 4
EXIT_INTERNAL = 5


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("ABPATHS_THREADS", "1")))
    except ValueError:
        return 1


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_validated(path: str):
    parsed = parse_instance(_read(path))
    report = validate(parsed.instance)
    if not report.ok:
        raise ValidationError(report)
    return parsed


def _cmd_solve(args) -> int:
    parsed = _load_validated(args.path)
    t0 = time.perf_counter()
    report = solve_report(parsed.instance, threads=args.threads)
    elapsed = time.perf_counter() - t0
    summary = report.summary
    text = format_result(
        "ok" if summary.feasible else "infeasible",
        summary.length,
        summary.count,
        poly=report.poly if args.dump_poly else None,
        config={"threads": args.threads, "instance": parsed.name or args.path},
        timings={"total_seconds": elapsed},
    )
    _emit(text, args.output)
    return EXIT_OK if summary.feasible else EXIT_NO_RESULT


def _cmd_witness(args) -> int:
    parsed = _load_validated(args.path)
    t0 = time.perf_counter()
    edges = witness(parsed.instance, args.index, threads=args.threads)
    length = sum(e.length for e in parsed.instance.graph.edges if e.key() in set(edges))
    text = format_result(
        "ok", length, 1, witness=edges,
        config={"threads": args.threads, "index": args.index,
                "instance": parsed.name or args.path},
        timings={"total_seconds": time.perf_counter() - t0},
    )
    _emit(text, args.output)
    return EXIT_OK


def _cmd_sample(args) -> int:
    parsed = _load_validated(args.path)
    t0 = time.perf_counter()
    edges = sample(parsed.instance, args.seed, threads=args.threads)
    length = sum(e.length for e in parsed.instance.graph.edges if e.key() in set(edges))
    text = format_result(
        "ok", length, 1, witness=edges,
        config={"threads": args.threads, "seed": args.seed,
                "instance": parsed.name or args.path},
        timings={"total_seconds": time.perf_counter() - t0},
    )
    _emit(text, args.output)
    return EXIT_OK


def _cmd_mis(args) -> int:
    parsed = parse_instance(_read(args.path))
    graph = parsed.instance.graph
    if args.emit_instance:
        red = reduce_mis(graph, parsed.rotation)
        _emit(format_instance(red.instance, name="mis-reduction"), args.emit_instance)
    t0 = time.perf_counter()
    alpha, count = mis_via_solver(graph, parsed.rotation, threads=args.threads,
                                  work_limit=args.work_limit)
    text = format_result(
        "ok", alpha, count,
        config={"threads": args.threads, "instance": parsed.name or args.path},
        timings={"total_seconds": time.perf_counter() - t0},
    )
    _emit(text, args.output)
    return EXIT_OK


def _cmd_gen(args) -> int:
    inst = random_instance(args.n, args.max_length, args.a_size, args.b_size,
                           args.seed, subdivide=args.subdivide, delete=args.delete)
    text = format_instance(
        inst, name=args.name, seed=args.seed,
        comment=f"random max-degree-3 planar instance (n={args.n}, L={args.max_length})",
    )
    _emit(text, args.output)
    return EXIT_OK


def _cmd_gadget(args) -> int:
    parsed = _load_validated(args.path)
    reduced, _ = normalize_to_cubic(parsed.instance)
    emb = planar_embed(reduced.graph)
    h = build_gadget_graph(reduced, emb)
    lines = [f"# gadget expansion: {h.num_vertices} vertices, "
             f"{h.num_internal} internal + {h.num_external} external edges"]
    for z, hub in sorted(h.centers.items()):
        lines.append(f"# terminal center of {z}: {hub}")
    lines.append(f"vertices {h.num_vertices}")
    for e in h.edges:
        lines.append(f"edge {e.a} {e.b} {max(e.exponent, 1)}  # {e.kind}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    parsed = parse_instance(_read(args.path))
    inst = parsed.instance
    if args.what == "solve":
        sol = enumerate_solutions(inst, cap=args.cap)
        lines = [f"status {'ok' if sol.min_length is not None else 'infeasible'}"]
        if sol.min_length is not None:
            lines.append(f"length {sol.min_length}")
        lines.append(f"count {sol.count}")
        for s in sol.solutions:
            pairs = sorted(inst.graph.edges[i].key() for i in s)
            lines.append("solution " + " ".join(f"{u},{v}" for u, v in pairs))
        _emit("\n".join(lines) + "\n", args.output)
        return EXIT_OK if sol.min_length is not None else EXIT_NO_RESULT
    if args.what == "mis":
        alpha, count = max_independent_sets(inst.graph.num_vertices, inst.graph.edges,
                                            cap=args.cap)
        _emit(f"alpha {alpha}\ncount {count}\n", args.output)
        return EXIT_OK
    # weighted perfect matchings of the file's graph, edge weight point**length
    weighted = [(e.u, e.v, args.point ** e.length) for e in inst.graph.edges]
    value = count_pm_brute(inst.graph.num_vertices, weighted, cap=args.cap)
    _emit(f"pm {value}\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abpaths",
        description="Exact shortest disjoint A,B-paths solver for planar graphs of maximum degree 3.",
    )
    parser.add_argument("--version", action="version", version=f"abpaths {__version__}")
    parser.add_argument("--config", help="file of 'key value' flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--threads", type=int, default=None, help="worker threads")
        p.add_argument("-o", "--output", default=None, help="write the result here")

    p = sub.add_parser("solve", help="optimal length and exact solution count")
    p.add_argument("path")
    p.add_argument("--dump-poly", action="store_true", help="emit all polynomial coefficients")
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("witness", help="the i-th optimal solution in canonical order")
    p.add_argument("path")
    p.add_argument("--index", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("sample", help="a uniformly random optimal solution")
    p.add_argument("path")
    p.add_argument("--seed", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("mis", help="count maximum independent sets of a cubic planar graph")
    p.add_argument("path")
    p.add_argument("--emit-instance", default=None, help="also write the reduced instance")
    p.add_argument("--work-limit", type=float, default=5e12)
    common(p)
    p.set_defaults(func=_cmd_mis)

    p = sub.add_parser("gen", help="generate a random planar instance")
    p.add_argument("--n", type=int, required=True, help="cubic skeleton size (even, >= 4)")
    p.add_argument("--max-length", type=int, default=4)
    p.add_argument("--a-size", type=int, default=2)
    p.add_argument("--b-size", type=int, default=2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--subdivide", type=int, default=0)
    p.add_argument("--delete", type=int, default=0)
    p.add_argument("--name", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("gadget", help="dump the matching gadget expansion (debug)")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=_cmd_gadget)

    p = sub.add_parser("oracle", help="brute-force reference computations")
    p.add_argument("what", choices=("solve", "mis", "pm"))
    p.add_argument("path")
    p.add_argument("--cap", type=int, default=16, help="vertex-count cap")
    p.add_argument("--point", type=int, default=1, help="evaluation point for pm")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_oracle)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    # Pull --config out, turn its entries into leading defaults after the
    # subcommand so explicit flags still win.
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    extra: list[str] = []
    for raw in _read(path).splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        flag = "--" + key.strip().replace("_", "-")
        already = any(a == flag for a in rest)
        if not already:
            if value.strip().lower() in ("true", ""):
                extra.append(flag)
            else:
                extra.extend([flag, value.strip()])
    # insert after the subcommand token (first non-flag argument)
    for k, a in enumerate(rest):
        if not a.startswith("-"):
            insert_at = k + 1
            break
    else:
        insert_at = len(rest)
    return rest[:insert_at] + extra + rest[insert_at:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if getattr(args, "threads", None) is None:
            args.threads = _default_threads()
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, NonPlanarError, NonCubicError) as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (InfeasibleError, WitnessIndexError, WorkLimitExceededError) as exc:
        print(f"no result: {exc}", file=sys.stderr)
        return EXIT_NO_RESULT
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AbpathsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
