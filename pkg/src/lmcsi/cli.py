"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 unsupported instance,
3 oracle budget exceeded, 4 a realization that fails ``verify``.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from .core import (KNotTwo, LmcsiError, Realization, as_rational, format_rational,
                   inside, instance_to_json, load_instance, mcsi_length,
                   result_to_json, separation_ok)
from .decision import NotUnit, decide
from .generators import FAMILIES, generate
from .optimize import UnsupportedK, solve
from .oracle import BudgetExceeded, oracle_optimize, oracle_witness

EXIT_OK, EXIT_MALFORMED, EXIT_UNSUPPORTED, EXIT_BUDGET, EXIT_INVALID = 0, 1, 2, 3, 4


def _emit(data: dict, out):
    text = json.dumps(data, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _witness_line(instance, reps) -> str:
    return "witness: " + " ".join(format_rational(r) for r in instance.to_input_order(reps))


def cmd_solve(args) -> int:
    instance = load_instance(args.file)
    res = solve(instance)
    _emit(result_to_json(instance, res.q_star, res.realization.reps, res.method), args.out)
    return EXIT_OK


def cmd_decide(args) -> int:
    instance = load_instance(args.file)
    out = decide(instance, as_rational(args.q))
    print("YES" if out.answer else "NO")
    if out.answer:
        print(_witness_line(instance, out.realization.reps))
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = load_instance(args.file)
    if args.q is None:
        print(f"q_star: {format_rational(oracle_optimize(instance))}")
        return EXIT_OK
    reps = oracle_witness(instance, as_rational(args.q))
    print("NO" if reps is None else "YES")
    if reps is not None:
        print(_witness_line(instance, reps))
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = load_instance(args.file)
    with open(args.realization, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LmcsiError(f"invalid realization JSON: {exc}") from exc
    raw = data.get("reps") if isinstance(data, dict) else data
    if not isinstance(raw, list):
        raise LmcsiError("realization JSON needs a 'reps' list")
    reps = instance.from_input_order(raw)
    if args.q is not None:
        q = as_rational(args.q)
    elif isinstance(data, dict) and "q_star" in data:
        q = as_rational(data["q_star"])
    else:
        q = None
    problems = []
    if not inside(instance, reps):
        problems.append("a representative lies outside its interval")
        print("mcsi_length: n/a")
    else:
        length = mcsi_length(instance, Realization(reps))
        print(f"mcsi_length: {format_rational(length)}")
        if q is not None:
            if instance.k == 2 and not separation_ok(instance, Realization(reps), q):
                problems.append(f"some red-blue pair is closer than {format_rational(q)}")
            elif length < q:
                problems.append(f"mcsi_length is below {format_rational(q)}")
    for p in problems:
        print(f"problem: {p}")
    print("verdict: " + ("INVALID" if problems else "VALID"))
    return EXIT_OK if not problems else EXIT_INVALID


def cmd_generate(args) -> int:
    instance = generate(args.family, args.n, args.k, args.seed, args.den)
    _emit(instance_to_json(instance), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        sizes = [int(float(s)) for s in args.sizes.split(",") if s.strip()]
    except ValueError as exc:
        raise LmcsiError(f"bad --sizes: {args.sizes!r}") from exc
    # Compile the kernels once so the first row is not charged for it.
    solve(generate(args.family, 64 if args.family != "UpperBoundPair" else 2,
                   args.k, args.seed, args.den))
    rows = []
    for n in sizes:
        instance = generate(args.family, n, args.k, args.seed, args.den)
        t0 = time.perf_counter()
        res = solve(instance)
        rows.append((n, args.family, f"{time.perf_counter() - t0:.4f}",
                     format_rational(res.q_star)))
    fh = sys.stdout if args.out is None else open(args.out, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(fh)
        w.writerow(("n", "family", "wall_time_s", "q_star"))
        w.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lmcsi", description=(
        "Place one point in each colored interval so that the shortest "
        "window holding every color is as long as possible."))
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="optimal value and a realization, as JSON")
    s.add_argument("file")
    s.add_argument("--out", help="write the result here instead of stdout")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("decide", help="is the optimum at least q? (two colors, unit lengths)")
    s.add_argument("file")
    s.add_argument("--q", required=True)
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("oracle", help="brute-force answer for small instances")
    s.add_argument("file")
    s.add_argument("--q", help="decide this threshold instead of optimizing")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("verify", help="check a realization file")
    s.add_argument("file")
    s.add_argument("--realization", required=True)
    s.add_argument("--q", help="required separation (default: the file's q_star)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("generate", help="write a seeded random instance")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--den", type=int, default=8, help="denominator of the coordinate grid")
    s.add_argument("--out")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("bench", help="time solve over generated sizes, as CSV")
    s.add_argument("--sizes", required=True, help="comma separated, e.g. 10000,40000")
    s.add_argument("--family", choices=FAMILIES, default="TwoColorOverlap")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--den", type=int, default=8)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UnsupportedK, KNotTwo, NotUnit) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (LmcsiError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
