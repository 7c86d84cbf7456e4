"""Command-line interface.

Exact values always cross this boundary as ``p/q`` strings.  Floats only
appear in quadrature and simulation output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import distributions as dist
from . import mcsim, verify
from .errors import DimorphicError, GridParseError
from .exact import as_rational, format_rational
from .stirling import FIRST, SECOND_DEGENERATE, stirling_table

IDENTITY_NAMES = {
    "t2": verify.T2,
    "t3": verify.T3,
    "t4-exact": verify.T4_EXACT,
    "t4-quad": verify.T4_QUAD,
}
REQUIRED = {
    verify.T2: ("n", "alpha", "lambda"),
    verify.T3: ("n", "lambda"),
    verify.T4_EXACT: ("n", "alpha", "lambda"),
    verify.T4_QUAD: ("n", "alpha", "lambda"),
}
GRID_KEYS = {"n", "l", "alpha", "lambda", "M"}


class UsageError(Exception):
    pass


def _rational_arg(text):
    try:
        return as_rational(text)
    except (DimorphicError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write_csv(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _spec_from_args(args) -> dist.BernoulliSumSpec:
    if args.family == "y":
        if args.alpha is not None or args.lam is not None:
            raise UsageError("family y takes no --alpha/--lambda")
        return dist.y_spec(args.n)
    if args.alpha is None or args.lam is None:
        raise UsageError("family z needs --alpha and --lambda")
    spec = dist.z_spec(args.n, args.alpha, args.lam, relaxed=True)
    if not spec.in_paper_range:
        print(
            f"warning: alpha={format_rational(spec.alpha)}, lambda={format_rational(spec.lam)} "
            "is outside alpha > 0, 0 < lambda < 1; continuing in relaxed mode",
            file=sys.stderr,
        )
    return spec


def cmd_stirling(args, out) -> int:
    if args.kind == "first":
        if args.lam is not None:
            raise UsageError("--lambda is only meaningful for --kind second-degenerate")
        table = stirling_table(FIRST, args.max_n)
    else:
        if args.lam is None:
            raise UsageError("--kind second-degenerate requires --lambda")
        table = stirling_table(SECOND_DEGENERATE, args.max_n, args.lam)
    entries = [(n, k, v) for n, k, v in table.entries() if n <= args.max_n]
    if args.format == "json":
        json.dump([{"n": n, "k": k, "value": format_rational(v)} for n, k, v in entries], out)
        out.write("\n")
    else:
        _write_csv(out, ["n", "k", "value"], [(n, k, format_rational(v)) for n, k, v in entries])
    return 0


def cmd_pmf(args, out) -> int:
    spec = _spec_from_args(args)
    probs = dist.pmf(spec).probabilities
    if args.format == "json":
        json.dump([{"k": k, "p": format_rational(p)} for k, p in enumerate(probs)], out)
        out.write("\n")
    else:
        _write_csv(out, ["k", "probability"], [(k, format_rational(p)) for k, p in enumerate(probs)])
    return 0


def cmd_moments(args, out) -> int:
    spec = _spec_from_args(args)
    mean, var = dist.mean(spec), dist.variance(spec)
    if args.format == "json":
        json.dump(
            {
                "family": spec.family,
                "n": spec.n,
                "mean": format_rational(mean),
                "variance": format_rational(var),
                "in_paper_range": spec.in_paper_range,
            },
            out,
        )
        out.write("\n")
    else:
        _write_csv(out, ["quantity", "value"], [("mean", format_rational(mean)), ("variance", format_rational(var))])
    return 0


def cmd_simulate(args, out) -> int:
    spec = _spec_from_args(args)
    config = mcsim.SimConfig(spec, args.samples, args.seed)
    summary = mcsim.run(config, workers=args.workers)
    out.write(summary.to_json() + "\n")
    return 0


def _grid_value(key, value, lineno):
    if key in ("n", "l", "M"):
        if isinstance(value, bool) or not isinstance(value, int):
            raise GridParseError(f"{key!r} must be an integer, got {value!r}", lineno)
        return value
    if isinstance(value, float) or isinstance(value, bool):
        raise GridParseError(f"{key!r} must be an integer or a 'p/q' string, got {value!r}", lineno)
    try:
        return as_rational(value)
    except (DimorphicError, TypeError):
        raise GridParseError(f"{key!r} is not a rational: {value!r}", lineno) from None


def parse_grid(text: str) -> list:
    """Parse a JSON array of parameter objects, reporting errors by line.

    Elements are decoded one at a time so that a bad entry can be located.
    """
    decoder = json.JSONDecoder()

    def line_of(pos):
        return text.count("\n", 0, pos) + 1

    def skip_ws(pos):
        while pos < len(text) and text[pos] in " \t\r\n":
            pos += 1
        return pos

    pos = skip_ws(0)
    if pos >= len(text) or text[pos] != "[":
        raise GridParseError("grid must be a JSON array", line_of(pos))
    pos = skip_ws(pos + 1)
    points = []
    if pos < len(text) and text[pos] == "]":
        pos += 1
    else:
        while True:
            start = pos
            try:
                obj, pos = decoder.raw_decode(text, pos)
            except json.JSONDecodeError as exc:
                raise GridParseError(exc.msg, exc.lineno) from None
            lineno = line_of(start)
            if not isinstance(obj, dict):
                raise GridParseError("each grid entry must be an object", lineno)
            unknown = set(obj) - GRID_KEYS
            if unknown:
                raise GridParseError(f"unknown keys {sorted(unknown)}", lineno)
            if "n" not in obj:
                raise GridParseError("entry is missing 'n'", lineno)
            points.append({k: _grid_value(k, v, lineno) for k, v in obj.items()})
            pos = skip_ws(pos)
            if pos < len(text) and text[pos] == ",":
                pos = skip_ws(pos + 1)
                continue
            if pos < len(text) and text[pos] == "]":
                pos += 1
                break
            raise GridParseError("expected ',' or ']'", line_of(pos))
    if skip_ws(pos) != len(text):
        raise GridParseError("trailing data after the array", line_of(skip_ws(pos)))
    return points


def expand_point(identity: str, point: dict) -> list:
    """Turn one grid point into the parameter dicts the verifier takes."""
    n = point["n"]
    base = {k: point[k] for k in ("alpha", "lambda") if k in point}
    if identity == verify.T2:
        return [{"n": n, **base}]
    ls = [point["l"]] if "l" in point else range(n + 1)
    if identity == verify.T3:
        return [{"n": n, "l": l, "lambda": point["lambda"]} for l in ls]
    if identity == verify.T4_EXACT:
        return [{"n": n, "l": l, **base} for l in ls]
    m = point.get("M", n + 1)
    return [{"n": n, "l": l, **base, "M": m} for l in ls]


def _has(point, keys):
    return all(k in point for k in keys)


def cmd_verify(args, out) -> int:
    if args.grid is not None:
        if any(v is not None for v in (args.n, args.l, args.alpha, args.lam, args.M)):
            raise UsageError("--grid cannot be combined with point flags")
        try:
            with open(args.grid, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read grid file: {exc}") from None
        points = parse_grid(text)
    else:
        if args.n is None:
            raise UsageError("give --n (and friends) or --grid")
        point = {"n": args.n}
        for key, value in (("l", args.l), ("alpha", args.alpha), ("lambda", args.lam), ("M", args.M)):
            if value is not None:
                point[key] = value
        points = [point]

    if args.identity == "all":
        identities = list(IDENTITY_NAMES.values())
    else:
        identities = [IDENTITY_NAMES[args.identity]]

    jobs = []
    for point in points:
        matched = False
        for ident in identities:
            if _has(point, REQUIRED[ident]):
                matched = True
                jobs.extend((ident, p) for p in expand_point(ident, point))
            elif args.identity != "all":
                missing = [k for k in REQUIRED[ident] if k not in point]
                raise UsageError(f"{args.identity} needs {', '.join('--' + m for m in missing)}")
        if not matched:
            raise UsageError(f"no identity can run with parameters {sorted(point)}")

    reports = []
    for ident in identities:
        pts = [p for i, p in jobs if i == ident]
        if pts:
            reports.extend(verify.sweep(ident, pts, workers=args.workers))

    if args.format == "csv":
        fields = ["identity", "params", "lhs", "rhs", "residual", "passed", "in_paper_range"]
        rows = []
        for r in reports:
            d = r.to_dict()
            rows.append([d["identity"], json.dumps(d["params"]), json.dumps(d["lhs"]),
                         json.dumps(d["rhs"]), json.dumps(d["residual"]), d["passed"], d["in_paper_range"]])
        _write_csv(out, fields, rows)
    else:
        for r in reports:
            out.write(r.to_json() + "\n")
    for r in reports:
        if r.error:
            print(f"error: {r.identity} {r.to_dict()['params']}: {r.error}", file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimorphic",
        description="Degenerate Stirling numbers, Bernoulli-sum distributions and identity checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stirling", help="dump a Stirling triangle")
    p.add_argument("--kind", choices=["first", "second-degenerate"], required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_rational_arg)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_stirling)

    def add_spec_flags(p):
        p.add_argument("--family", choices=["y", "z"], type=str.lower, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--alpha", type=_rational_arg)
        p.add_argument("--lambda", dest="lam", type=_rational_arg)

    p = sub.add_parser("pmf", help="exact probability mass function")
    add_spec_flags(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("moments", help="exact mean and variance")
    add_spec_flags(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("simulate", help="seeded Monte Carlo against the exact PMF")
    add_spec_flags(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check the identities; exit 0 iff all pass")
    p.add_argument("--identity", choices=[*IDENTITY_NAMES, "all"], required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--alpha", type=_rational_arg)
    p.add_argument("--lambda", dest="lam", type=_rational_arg)
    p.add_argument("--M", type=int)
    p.add_argument("--grid", help="JSON array of parameter objects")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.error(str(exc))
    except GridParseError as exc:
        print(f"error: grid file {args.grid}: {exc}", file=sys.stderr)
        return 2
    except DimorphicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
