"""Command-line front end.

Exit status: 0 success, 1 negative verdict (not resolving, self-test
failure), 2 usage or domain error, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds as bnd
from .bilform import DEFAULT_ENUM_CAP, CapExceeded, GraphSpec, write_vertices_csv
from .gf import FieldError
from .linalg import LinalgError
from .resolving import LandmarkSet, build_landmarks, find_separating_landmark, verify_resolving
from .selftest import run_all

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _spec(args) -> GraphSpec:
    if args.q is None or args.n is None or args.d is None:
        raise ValueError("--q, --n and --d are required")
    return GraphSpec.of(args.q, args.n, args.d)


def cmd_construct(args) -> int:
    spec = _spec(args)
    M, ctx = build_landmarks(spec)
    if args.format == "csv":
        _emit(write_vertices_csv(spec, M.matrices), args.out)
    else:
        doc = M.to_dict()
        doc["context"] = ctx.summary()
        _emit(_dumps(doc), args.out)
    print(f"constructed {len(M)} landmarks (case {ctx.case_tag})", file=sys.stderr)
    return EXIT_OK


def _load_landmarks(path: str) -> LandmarkSet:
    with open(path, encoding="utf-8") as fh:
        return LandmarkSet.from_dict(json.load(fh))


def cmd_verify(args) -> int:
    if args.landmarks:
        M = _load_landmarks(args.landmarks)
        spec = M.graph
    else:
        spec = _spec(args)
        spec.check_cap(args.cap)
        M, _ = build_landmarks(spec)
    cert = verify_resolving(M, spec, workers=args.workers, cap=args.cap)
    _emit(cert.to_json(canonical=args.canonical), args.out)
    if args.canonical:
        print(json.dumps(cert.stats, sort_keys=True), file=sys.stderr)
    if not cert.resolving:
        u, v = cert.counterexample
        print(f"not resolving: vertices {u} and {v} share a signature", file=sys.stderr)
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_witness(args) -> int:
    spec = _spec(args)
    _, ctx = build_landmarks(spec)
    if args.a == args.b:
        raise ValueError("witness needs two distinct vertex indices")
    w = find_separating_landmark(spec.vertex(args.a), spec.vertex(args.b), ctx)
    doc = {
        "a": args.a,
        "b": args.b,
        "landmark_position": w.position,
        "landmark_index": spec.index(w.landmark),
        "landmark": w.landmark.tolist(),
        "block": w.block,
        "coords": list(w.coords),
        "branch": w.branch,
        "dims": list(w.dims),
    }
    _emit(_dumps(doc), args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    rows = [bnd.bounds_row(args.q, args.n, args.d, args.log_base, baselines=args.baselines)]
    _emit(bnd.report_csv(rows) if args.format == "csv" else bnd.report_json(rows), args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    qs = args.qs or [2, 3]
    grid = [(q, n, d) for q in qs for n in range(args.min_d, args.max_n + 1) for d in range(args.min_d, n + 1)]
    rows = bnd.compare_report(grid, args.log_base, baselines=args.baselines)
    _emit(bnd.report_csv(rows) if args.format == "csv" else bnd.report_json(rows), args.out)
    return EXIT_OK


def cmd_search(args) -> int:
    spec = _spec(args)
    greedy = bnd.greedy_resolving(spec, cap=args.cap)
    cert = verify_resolving(greedy, spec)
    doc = {
        "spec": {"q": spec.q, "n": spec.n, "d": spec.d},
        "greedy": greedy.indices,
        "greedy_size": len(greedy),
        "greedy_resolving": cert.resolving,
    }
    if args.k_max is not None:
        doc["exact_min"] = bnd.exact_min_resolving(spec, args.k_max, cap=min(args.cap, 128))
    _emit(_dumps(doc), args.out)
    return EXIT_OK if cert.resolving else EXIT_NEGATIVE


def cmd_selftest(args) -> int:
    results = run_all()
    for name, ok in results.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK if all(results.values()) else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)
    common.add_argument("--log-base", default="e")
    common.add_argument("--landmarks")
    common.add_argument("--out")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--canonical", action="store_true")

    parser = argparse.ArgumentParser(prog="bilmetric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("construct", parents=[common], help="build the landmark set").set_defaults(fn=cmd_construct)
    sub.add_parser("verify", parents=[common], help="exhaustively check a landmark set").set_defaults(fn=cmd_verify)
    w = sub.add_parser("witness", parents=[common], help="separating landmark for two vertices")
    w.add_argument("--a", type=int, required=True)
    w.add_argument("--b", type=int, required=True)
    w.set_defaults(fn=cmd_witness)
    b = sub.add_parser("bounds", parents=[common], help="bound comparison for one graph")
    b.add_argument("--baselines", action="store_true")
    b.set_defaults(fn=cmd_bounds)
    t = sub.add_parser("table", parents=[common], help="bound comparison over a grid")
    t.add_argument("--qs", type=int, nargs="*")
    t.add_argument("--min-d", type=int, default=2)
    t.add_argument("--max-n", type=int, default=6)
    t.add_argument("--baselines", action="store_true")
    t.set_defaults(fn=cmd_table)
    s = sub.add_parser("search", parents=[common], help="greedy and exact baselines")
    s.add_argument("--k-max", type=int)
    s.set_defaults(fn=cmd_search)
    sub.add_parser("selftest", parents=[common], help="invariant suites").set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1 or args.cap < 1:
        parser.error("--workers and --cap must be positive")
    try:
        return args.fn(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, FieldError, LinalgError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
