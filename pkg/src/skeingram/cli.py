"""Command-line interface: ``skeingram <command> [options]``.

Exit status: 0 on success, 1 when a check or a method comparison fails,
2 on invalid arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from .dyck_paths import (
    DyckPath,
    alpha_closed,
    alpha_enumerate,
    count_paths_closed,
    down_steps,
    image_heights,
    iter_paths,
    phi_map,
    theta_map,
)
from .genfun import ckh_series, ck_series, down_step_count_gf
from .gram_forms import det_closed, det_closed_factored, det_fraction_free, gram_matrix, meander_matrix
from .skein_bases import dimension
from . import verify as checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def non_negative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skeingram", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", metavar="FILE", help="write JSON to FILE instead of stdout")

    p = sub.add_parser("det", help="Gram determinant in the natural basis")
    p.add_argument("--n", type=positive, required=True)
    p.add_argument("--h", type=non_negative, required=True)
    p.add_argument("--method", choices=("closed", "eliminate", "both"), default="closed")
    p.add_argument("--at", type=rational, help="evaluate exactly at A = AT")
    common(p)

    p = sub.add_parser("gram", help="dump a Gram or semi-meander matrix")
    p.add_argument("--n", type=positive, required=True)
    p.add_argument("--h", type=non_negative, required=True)
    p.add_argument("--basis", choices=("B", "D", "S", "T"), default="B")
    p.add_argument("--convention", choices=("all_loops", "exclude_through"), default="all_loops")
    p.add_argument("--at", type=rational, help="evaluate exactly at A = AT (bases B and D)")
    common(p)

    p = sub.add_parser("alpha", help="number of k-down steps over all paths")
    p.add_argument("--n", type=non_negative, required=True)
    p.add_argument("--h", type=non_negative, required=True)
    p.add_argument("--k", type=positive, required=True)
    p.add_argument("--method", choices=("formula", "enumerate", "gf", "bijection", "all"), default="all")
    common(p)

    p = sub.add_parser("paths", help="list generalized Dyck paths")
    p.add_argument("--n", type=non_negative, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--k", type=positive, help="also list the k-down steps of each path")
    common(p)

    p = sub.add_parser("bijection-check", help="exhaustive round trips of the cut-and-reflect bijection")
    p.add_argument("--max-n", type=positive, default=12)
    p.add_argument("--lowest", choices=("leftmost", "rightmost", "both"), default="both")
    common(p)

    p = sub.add_parser("series", help="coefficient table of a generating function")
    p.add_argument("--k", type=non_negative, required=True)
    p.add_argument("--h", type=non_negative, help="end height (omit for Dyck paths back to 0)")
    p.add_argument("--order", type=non_negative, required=True)
    common(p)

    p = sub.add_parser("verify", help="run the cross-verification suite")
    p.add_argument("--max-n", type=positive, default=10)
    p.add_argument("--no-numeric", action="store_true", help="skip the exact evaluation tier")
    common(p)
    return parser


# -- rendering ---------------------------------------------------------------------------


def _factored_text(n: int, h: int) -> str:
    f = det_closed_factored(n, h)
    parts = [f"Delta_{h}^{f['delta_h_power']}"]
    parts += [f"(Delta_{k}/Delta_{k - 1})^{a}" for k, a in f["ratio_powers"]]
    return " * ".join(parts)


def _emit(args, payload: dict, text: str, out: TextIO) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.format == "json" and not args.out:
        json.dump(payload, out, indent=2, sort_keys=True)
        out.write("\n")
    elif args.format == "text":
        out.write(text.rstrip("\n") + "\n")


def _value_json(v) -> dict:
    if isinstance(v, Fraction):
        return {"num": str(v.numerator), "den": str(v.denominator)}
    return v.to_json()


def _require_module(n: int, h: int) -> None:
    if not dimension(n, h):
        raise UsageError(f"the module for n={n}, h={h} is zero (need h <= n and n = h mod 2)")


# -- commands ----------------------------------------------------------------------------


def cmd_det(args, out: TextIO) -> int:
    _require_module(args.n, args.h)
    closed = det_closed(args.n, args.h)
    values = {}
    if args.method in ("closed", "both"):
        values["closed"] = closed if args.at is None else closed.evaluate(args.at)
    if args.method in ("eliminate", "both"):
        values["eliminate"] = det_fraction_free(gram_matrix(args.n, args.h, "B", at=args.at))
    agree = len(set(map(str, values.values()))) == 1
    payload = {
        "n": args.n,
        "h": args.h,
        "det": _value_json(next(iter(values.values()))),
        "factored": det_closed_factored(args.n, args.h),
        "methods": {k: _value_json(v) for k, v in values.items()},
        "agree": agree,
    }
    if args.at is not None:
        payload["A"] = str(args.at)
    lines = [f"det(B) for n={args.n}, h={args.h}" + (f" at A={args.at}" if args.at is not None else "")]
    lines.append(f"  factored: {_factored_text(args.n, args.h)}")
    for k, v in values.items():
        lines.append(f"  {k}: {v}")
    if len(values) > 1:
        lines.append(f"  agree: {'yes' if agree else 'NO'}")
    _emit(args, payload, "\n".join(lines), out)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_gram(args, out: TextIO) -> int:
    _require_module(args.n, args.h)
    if args.basis in ("S", "T"):
        if args.at is not None:
            raise UsageError("--at applies to bases B and D only")
        m = meander_matrix(args.n, args.h, args.basis, args.convention)
    else:
        m = gram_matrix(args.n, args.h, args.basis, at=args.at)
    lines = [f"{args.basis} matrix, n={args.n}, h={args.h}, size {m.size}"]
    for i, t in enumerate(m.labels):
        lines.append(f"  {t.to_text()}: " + " | ".join(str(v) for v in m.entries[i]))
    _emit(args, m.to_json(), "\n".join(lines), out)
    return EXIT_OK


def _alpha_bijection(n: int, h: int, k: int) -> int:
    """Count marked paths through their images: each image path pulls back to one mark."""
    total = 0
    for e in image_heights(n, h, k):
        for s in iter_paths(n, e):
            try:
                m = phi_map(DyckPath(s), k, h)
            except ValueError:
                continue
            if theta_map(m, k)[0].steps == s:
                total += 1
    return total


def cmd_alpha(args, out: TextIO) -> int:
    n, h, k = args.n, args.h, args.k
    routes = {
        "formula": lambda: alpha_closed(n, h, k),
        "enumerate": lambda: alpha_enumerate(n, h, k),
        "gf": lambda: down_step_count_gf(n, h, k),
        "bijection": lambda: _alpha_bijection(n, h, k) if count_paths_closed(n, h) else 0,
    }
    chosen = list(routes) if args.method == "all" else [args.method]
    values = {name: routes[name]() for name in chosen}
    agree = len(set(values.values())) == 1
    payload = {"n": n, "h": h, "k": k, "values": values, "agree": agree}
    if len(values) == 1:
        text = str(next(iter(values.values())))
    else:
        text = "\n".join(f"{name}: {v}" for name, v in values.items()) + f"\nagree: {'yes' if agree else 'NO'}"
    _emit(args, payload, text, out)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_paths(args, out: TextIO) -> int:
    if args.format == "text" and not args.out:
        # stream: one path per line
        count = 0
        for s in iter_paths(args.n, args.h):
            count += 1
            extra = f"  {args.k}-down: {down_steps(DyckPath(s), args.k)}" if args.k else ""
            out.write(f"{s}{extra}\n")
        out.write(f"# {count} paths\n")
        return EXIT_OK
    items = []
    for s in iter_paths(args.n, args.h):
        item = {"steps": s}
        if args.k:
            item["down_steps"] = down_steps(DyckPath(s), args.k)
        items.append(item)
    payload = {"n": args.n, "h": args.h, "paths": items}
    _emit(args, payload, "\n".join(i["steps"] for i in items) + f"\n# {len(items)} paths", out)
    return EXIT_OK


def cmd_bijection(args, out: TextIO) -> int:
    rules = ("leftmost", "rightmost") if args.lowest == "both" else (args.lowest,)
    outcome = {r: checks.bijection_witness(args.max_n, r) for r in rules}
    passing = [r for r, w in outcome.items() if w is None]
    payload = {"max_n": args.max_n, "results": {r: {"passed": w is None, "witness": w} for r, w in outcome.items()}}
    payload["passing"] = passing
    lines = [f"{r}: {'pass' if w is None else 'fail (' + w + ')'}" for r, w in outcome.items()]
    lines.append(f"passing convention: {', '.join(passing) or 'none'}")
    _emit(args, payload, "\n".join(lines), out)
    return EXIT_OK if passing else EXIT_FAIL


def cmd_series(args, out: TextIO) -> int:
    if args.h is None:
        if args.k < 1:
            raise UsageError("--k must be at least 1 when --h is omitted")
        s = ck_series(args.k, args.order)
        title = f"C_{args.k}(x,q)"
    else:
        s = ckh_series(args.k, args.h, args.order)
        title = f"C_{args.k},{args.h}(x,q)"
    width = max((c.degree() for c in s.coeffs if c != 0), default=0) + 1
    lines = [f"{title} up to x^{args.order}: row n, column m = count with q^m",
             "n\\m " + " ".join(f"{m:>6}" for m in range(width))]
    for n, c in enumerate(s.coeffs):
        vals = [int(c[m]) if m <= c.degree() else 0 for m in range(width)]
        lines.append(f"{n:>3} " + " ".join(f"{v:>6}" for v in vals))
    _emit(args, s.to_json(), "\n".join(lines), out)
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    report = checks.run_all(args.max_n, numeric=not args.no_numeric)
    lines = [r.line() for r in report.results]
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'}")
    _emit(args, report.to_json(), "\n".join(lines), out)
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    "det": cmd_det,
    "gram": cmd_gram,
    "alpha": cmd_alpha,
    "paths": cmd_paths,
    "bijection-check": cmd_bijection,
    "series": cmd_series,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"skeingram {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
