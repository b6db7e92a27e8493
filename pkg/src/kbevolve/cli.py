"""Command-line front end: ``kbevolve <command> [flags]``.

Exit codes: 0 ok, 2 usage or parse error, 3 inconsistent TBox, 4 inconsistent
input where consistency is required (including an impossible insertion),
5 engine resource limit.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from pathlib import Path

from .clauses import format_clauses
from .engine import Limits, ResourceLimitError
from .evolution import Evolver, InconsistentTBoxError, InvalidRequestError
from .generator import GeneratorProfile, generate
from .parser import ParseError, parse_assertion, parse_kb, serialize_kb
from .renamer import kstar, tracked_symbols

EXIT_OK, EXIT_USAGE, EXIT_TBOX, EXIT_INPUT, EXIT_LIMIT = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    return parse_kb(text)


def _assertion(text: str | None, flag: str = "--assertion"):
    if not text:
        raise UsageError(f"{flag} is required")
    return parse_assertion(text)


def _write(out: str | None, text: str) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _evolver(args, kb) -> Evolver:
    trace = None
    if getattr(args, "trace", False):
        def trace(msg: str) -> None:
            print(f"trace: {msg}", file=sys.stderr)
    return Evolver(kb, limits=Limits.from_env(), trace=trace)


def _render(result) -> str:
    lines = [f"operation: {result.operation}", f"status: {result.status}"]
    if result.request is not None:
        lines.append(f"request: {result.request}")
    if result.mode:
        lines.append(f"mode: {result.mode}")
    lines.append(f"removed ({len(result.removed)}):")
    lines += [f"  {a}" for a in sorted(map(str, result.removed))]
    if result.added is not None:
        lines.append(f"added: {result.added}")
    lines.append(f"kept: {len(result.resulting_abox)}")
    if result.status == "input-inconsistent":
        lines.append("hint: the ABox is inconsistent with the TBox; run 'kbevolve repair' first")
    return "\n".join(lines) + "\n"


def _emit(args, payload) -> None:
    if isinstance(payload, list):
        if args.json:
            print(json.dumps([r.to_json() for r in payload], indent=2))
        else:
            for i, r in enumerate(payload, 1):
                print(f"# result {i} of {len(payload)}")
                sys.stdout.write(_render(r))
    elif args.json:
        print(json.dumps(payload.to_json(), indent=2))
    else:
        sys.stdout.write(_render(payload))


# -- commands ---------------------------------------------------------------------

def cmd_clausify(args) -> int:
    kb = _load(args.path)
    ev = Evolver(kb)
    if not ev.tbox_consistent():
        print("error: the TBox is inconsistent", file=sys.stderr)
        return EXIT_TBOX
    _write(args.out, format_clauses(ev.xi))
    return EXIT_OK


def cmd_transform(args) -> int:
    kb = _load(args.path)
    ev = Evolver(kb)
    if not ev.tbox_consistent():
        print("error: the TBox is inconsistent", file=sys.stderr)
        return EXIT_TBOX
    extras = [parse_assertion(args.delete_request)] if args.delete_request else []
    s = tracked_symbols(kb, args.tracked, extras, tbox_clauses=ev.xi)
    _write(args.out, format_clauses(kstar(kb, s, tbox_clauses=ev.xi)))
    return EXIT_OK


def cmd_delete(args) -> int:
    kb = _load(args.path)
    d = _assertion(args.assertion)
    ev = _evolver(args, kb)
    res = ev.delete(d, enumerate=args.enumerate, limit=args.limit, max_bound=args.max_bound)
    _emit(args, res)
    first = res[0] if isinstance(res, list) else res
    return EXIT_INPUT if first.status == "input-inconsistent" else EXIT_OK


def cmd_insert(args) -> int:
    kb = _load(args.path)
    d = _assertion(args.assertion)
    res = _evolver(args, kb).insert(d)
    _emit(args, res)
    return EXIT_INPUT if res.status == "impossible" else EXIT_OK


def cmd_repair(args) -> int:
    kb = _load(args.path)
    res = _evolver(args, kb).repair(enumerate=args.all, limit=args.limit)
    _emit(args, res)
    return EXIT_OK


def cmd_check(args) -> int:
    kb = _load(args.path)
    ev = _evolver(args, kb)
    tbox_ok = ev.tbox_consistent()
    kb_ok = ev.consistent() if tbox_ok else False
    bad = len(ev._inconsistent_components()) if tbox_ok else 0
    report = {"operation": "check", "tbox_consistent": tbox_ok, "kb_consistent": kb_ok,
              "assertions": len(kb.abox), "components": ev.component_count,
              "inconsistent_components": bad}
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"TBox consistent: {'yes' if tbox_ok else 'no'}")
        print(f"T + A consistent: {'yes' if kb_ok else 'no'}")
        print(f"assertions: {len(kb.abox)} in {ev.component_count} components"
              f" ({bad} inconsistent)")
    return EXIT_OK if tbox_ok else EXIT_TBOX


def _profile(args, n_assertions: int | None = None) -> GeneratorProfile:
    return GeneratorProfile(
        seed=args.seed,
        n_assertions=args.assertions if n_assertions is None else n_assertions,
        n_concepts=args.concepts, n_roles=args.roles, n_individuals=args.individuals,
        n_gcis=args.gcis, chain_depth=args.chain_depth, branching=args.branching,
        cluster_size=args.cluster_size,
        inject_inconsistency=getattr(args, "inject_inconsistency", 0),
    )


def cmd_gen(args) -> int:
    try:
        kb = generate(_profile(args))
    except ValueError as e:
        raise UsageError(str(e)) from e
    _write(args.out, serialize_kb(kb))
    return EXIT_OK


def _percentile(values: list[float], q: float) -> float:
    """Nearest-rank percentile."""
    s = sorted(values)
    k = max(0, min(len(s) - 1, int(-(-q * len(s) // 100)) - 1))
    return s[k]


def bench_rows(sizes: list[int], requests: int, seed: int, verify: bool = False,
               profile_args=None, log=None) -> list[dict]:
    """Timings of ``requests`` random deletions on generated KBs of each size.

    The Evolver is built and its consistency precheck run before timing, so the
    reported numbers are per-request deletion times.
    """
    rows = []
    for n in sizes:
        if profile_args is not None:
            profile = _profile(profile_args, n)
        else:
            profile = GeneratorProfile(seed=seed, n_assertions=n)
        kb = generate(profile)
        t0 = time.perf_counter()
        ev = Evolver(kb, limits=Limits.from_env())
        ev.prepare()
        prep = time.perf_counter() - t0
        rng = random.Random(seed * 1_000_003 + n)
        pool = sorted(kb.abox, key=str)
        reqs = rng.sample(pool, min(requests, len(pool)))
        series: dict[str, list[float]] = {"atomic": [], "non-atomic": []}
        failures = 0
        for d in reqs:
            t = time.perf_counter()
            r = ev.delete(d)
            dt = time.perf_counter() - t
            series["atomic" if len(r.removed) == 1 else "non-atomic"].append(dt)
            if verify and not ev.verify_deletion(r):
                failures += 1
        for kind, vals in series.items():
            row = {"size": n, "kind": kind, "count": len(vals)}
            for name, fn in (("mean", lambda v: sum(v) / len(v)), ("p50", lambda v: _percentile(v, 50)),
                             ("p90", lambda v: _percentile(v, 90)), ("max", max)):
                row[name] = round(fn(vals), 6) if vals else ""
            row["prepare_seconds"] = round(prep, 3)
            row["verify_failures"] = failures if verify else ""
            rows.append(row)
        if log:
            log(f"size {n}: prepared in {prep:.2f}s, {len(reqs)} requests")
    return rows


BENCH_COLUMNS = ["size", "kind", "count", "mean", "p50", "p90", "max", "prepare_seconds",
                 "verify_failures"]


def cmd_bench(args) -> int:
    try:
        sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    except ValueError as e:
        raise UsageError(f"--sizes must be a comma separated list of integers: {args.sizes}") from e
    if not sizes or any(n < 1 for n in sizes) or args.requests < 1:
        raise UsageError("sizes and --requests must be positive")
    rows = bench_rows(sizes, args.requests, args.seed, args.verify, args,
                      log=lambda m: print(m, file=sys.stderr))
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=BENCH_COLUMNS)
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    failed = any(r["verify_failures"] not in ("", 0) for r in rows)
    return EXIT_INPUT if failed else EXIT_OK


# -- argument parsing -------------------------------------------------------------

def _gen_flags(p: argparse.ArgumentParser) -> None:
    d = GeneratorProfile()
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--concepts", type=int, default=d.n_concepts)
    p.add_argument("--roles", type=int, default=d.n_roles)
    p.add_argument("--individuals", type=int, default=None,
                   help="number of individuals (default: a third of the assertions)")
    p.add_argument("--gcis", type=int, default=d.n_gcis)
    p.add_argument("--chain-depth", type=int, default=d.chain_depth)
    p.add_argument("--branching", type=int, default=d.branching)
    p.add_argument("--cluster-size", type=int, default=d.cluster_size)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kbevolve", description="SHI ABox evolution via minimal models")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clausify", help="print the DL-clauses of the TBox")
    p.add_argument("path")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_clausify)

    p = sub.add_parser("transform", help="print the K* clause set")
    p.add_argument("path")
    p.add_argument("--tracked", choices=["abox", "kb"], default="abox")
    p.add_argument("--delete-request", help="also track the symbol of this assertion")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("delete", help="minimal instance deletion")
    p.add_argument("path")
    p.add_argument("--assertion")
    p.add_argument("--json", action="store_true")
    p.add_argument("--enumerate", action="store_true", help="report every minimal deletion")
    p.add_argument("--limit", type=int)
    p.add_argument("--max-bound", type=int)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_delete)

    p = sub.add_parser("insert", help="minimal instance insertion")
    p.add_argument("path")
    p.add_argument("--assertion")
    p.add_argument("--json", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_insert)

    p = sub.add_parser("repair", help="minimal ABox repair")
    p.add_argument("path")
    p.add_argument("--all", action="store_true", help="enumerate all minimal repairs")
    p.add_argument("--limit", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("check", help="TBox and KB consistency")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="generate a synthetic KB")
    p.add_argument("--assertions", type=int, default=GeneratorProfile().n_assertions)
    p.add_argument("--inject-inconsistency", type=int, default=0, metavar="K")
    _gen_flags(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="deletion timings on generated KBs (CSV)")
    p.add_argument("--sizes", default="1000,5000")
    p.add_argument("--requests", type=int, default=100)
    p.add_argument("--verify", action="store_true")
    _gen_flags(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, InvalidRequestError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InconsistentTBoxError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TBOX
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
