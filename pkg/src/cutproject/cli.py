"""Command line front end: scheme files in, reports and point sets out."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import gallery
from .classify import classify, permutation_scan, pq_estimate, repetitivity_scan, trend_test
from .errors import CutProjectError
from .io import dumps_csv, dumps_json, dumps_scheme, loads_scheme, report
from .scheme import (check_regular, distinct_patches, generate, is_aperiodic, period_group,
                     rational_relations, WindowKind)
from .window import RegionDecomposition, local_derivability


class Failure(Exception):
    """Validation finished but the scheme is rejected; carries the report."""

    def __init__(self, doc: dict):
        super().__init__("rejected")
        self.doc = doc


def _read_scheme(path: str | None):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return loads_scheme(text)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(args, command: str, scheme, params: dict, header: list[str], rows: list[list[Any]],
           extra: dict | None = None) -> str:
    if args.format == "json":
        result = [dict(zip(header, row)) for row in rows]
        if extra:
            result = {"rows": result, **extra}
        return dumps_json(report(scheme, command, params, result))
    return dumps_csv(header, rows)


# -- subcommands ---------------------------------------------------------------

def cmd_validate(args) -> str:
    s = _read_scheme(args.scheme)
    reg = check_regular(s)
    rels = rational_relations(s)
    res = {"valid": True, "k": s.k, "d": s.d, "window": s.window.value,
           "totally_irrational": not rels, "relations": [r.describe() for r in rels],
           "aperiodic": is_aperiodic(s), "period_group": period_group(s).to_json(),
           "shift": reg.to_json(), "inexact": s.inexact}
    doc = report(s, "validate", {}, res)
    if not reg.regular:
        raise Failure(doc)
    return dumps_json(doc)


def cmd_gen(args) -> str:
    s = _read_scheme(args.scheme)
    pts = generate(s, args.radius, embedded=args.embedded, exact_internal=False)
    header = [f"n_{j + 1}" for j in range(s.d)] + [f"offset_{i + 1}" for i in range(s.q)]
    if args.embedded:
        header += [f"x_{j + 1}" for j in range(s.d)]
    rows = []
    for p in pts:
        row = list(p.n) + list(p.offset)
        if args.embedded:
            row += [repr(v) for v in p.embedded]
        rows.append(row)
    return _table(args, "gen", s, {"radius": args.radius, "embedded": args.embedded}, header, rows)


def cmd_complexity(args) -> str:
    s = _read_scheme(args.scheme)
    rows = []
    for r in range(1, args.rmax + 1):
        if s.window is WindowKind.CUBICAL:
            dec = RegionDecomposition(s, r)
            mn = dec.min_volume()
            rows.append([r, dec.count, str(mn), repr(float(mn)), "regions"])
        else:
            # canonical windows: classes counted in a box of radius 50 r
            rows.append([r, len(distinct_patches(s, r, 50 * r)), "", "", "census"])
    return _table(args, "complexity", s, {"rmax": args.rmax},
                  ["r", "c_r", "min_volume", "min_volume_decimal", "method"], rows)


def cmd_lr(args) -> str:
    s = _read_scheme(args.scheme)
    v = classify(s, args.depth)
    return dumps_json(report(s, "lr", {"depth": args.depth}, v.to_json()))


def cmd_repetitivity(args) -> str:
    s = _read_scheme(args.scheme)
    recs = repetitivity_scan(s, args.rmax)
    header = ["r", "c_r"] + [f"min_gap_{i + 1}" for i in range(s.q)] + ["R_r", "ratio", "mode"]
    rows = [[rec.r, rec.c_r, *[repr(g) for g in rec.min_gaps], "" if rec.R is None else rec.R,
             repr(rec.ratio), rec.mode] for rec in recs]
    trend = trend_test(recs).to_json()
    return _table(args, "repetitivity", s, {"rmax": args.rmax}, header, rows, {"trend": trend})


def cmd_pq(args) -> str:
    s = _read_scheme(args.scheme)
    rs = _int_list(args.r)
    rep = pq_estimate(s, rs, args.sample_radius, seed=args.seed)
    rows = [[rec.r, repr(rec.min_frequency), repr(rec.scaled), rec.exact or "", rec.mode]
            for rec in rep.records]
    return _table(args, "pq", s, {"r": rs, "sample_radius": args.sample_radius, "seed": args.seed},
                  ["r", "min_frequency", "scaled", "exact", "mode"], rows, {"minimum": rep.minimum})


def cmd_frequencies(args) -> str:
    s = _read_scheme(args.scheme)
    R = args.sample_radius or 100 * args.r
    census = distinct_patches(s, args.r, R)
    total = sum(census.counts)
    rows = [[i, c, repr(c / total)] for i, c in enumerate(census.counts)]
    return _table(args, "frequencies", s, {"r": args.r, "sample_radius": R},
                  ["class_id", "count", "frequency"], rows)


def cmd_derivability(args) -> str:
    s = _read_scheme(args.scheme)
    return dumps_json(report(s, "derivability", {}, local_derivability(s).to_json()))


def cmd_permutations(args) -> str:
    s = _read_scheme(args.scheme)
    recs = permutation_scan(s)
    return dumps_json(report(s, "permutations", {}, [r.to_json() for r in recs]))


def cmd_gallery(args) -> str:
    params = json.loads(args.params) if args.params else {}
    return dumps_scheme(gallery.build(args.name, params).scheme)


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool) -> argparse.ArgumentParser:
        # global flags may come before or after the subcommand; the copy on
        # subcommands must not reset values given earlier
        g = argparse.ArgumentParser(add_help=False)
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g.add_argument("--seed", type=int, default=dflt(0), help="seed for sampled quantities")
        g.add_argument("--threads", type=int, default=dflt(1), help="worker count (computations are serial)")
        g.add_argument("--format", choices=("json", "csv"), default=dflt(None))
        g.add_argument("-o", "--output", default=dflt(None), help="output file (default stdout)")
        return g

    common = flags(True)
    p = argparse.ArgumentParser(prog="cutproject", parents=[flags(False)],
                                description="Cut and project sets and linear repetitivity.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, fmt, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func, default_format=fmt)
        return sp

    def scheme_arg(sp):
        sp.add_argument("scheme", nargs="?", default=None, help="scheme file, or - / omitted for stdin")

    sp = add("validate", cmd_validate, "json", "check a scheme file")
    scheme_arg(sp)
    sp = add("gen", cmd_gen, "csv", "accepted points in a box")
    scheme_arg(sp)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--embedded", action="store_true")
    sp = add("complexity", cmd_complexity, "csv", "patch counts c(r)")
    scheme_arg(sp)
    sp.add_argument("--rmax", type=int, required=True)
    sp = add("lr", cmd_lr, "json", "linear repetitivity verdict")
    scheme_arg(sp)
    sp.add_argument("--depth", type=int, default=None)
    sp = add("repetitivity", cmd_repetitivity, "csv", "repetitivity function estimates")
    scheme_arg(sp)
    sp.add_argument("--rmax", type=int, required=True)
    sp = add("pq", cmd_pq, "csv", "minimal patch frequency times r^d")
    scheme_arg(sp)
    sp.add_argument("--r", required=True, help="comma separated radii")
    sp.add_argument("--sample-radius", type=int, default=None)
    sp = add("frequencies", cmd_frequencies, "csv", "sampled patch frequencies")
    scheme_arg(sp)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--sample-radius", type=int, default=None)
    sp = add("derivability", cmd_derivability, "json", "local derivability between windows")
    scheme_arg(sp)
    sp = add("permutations", cmd_permutations, "json", "rank condition for each parametrization")
    scheme_arg(sp)
    sp = add("gallery", cmd_gallery, "json", "write a gallery scheme")
    sp.add_argument("name", choices=gallery.names())
    sp.add_argument("--params", default=None, help="JSON object of builder parameters")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        text = args.func(args)
    except Failure as f:
        _emit(dumps_json(f.doc), args.output)
        return 1
    except CutProjectError as exc:
        sys.stdout.write(dumps_json({"error": exc.code, "message": str(exc)}))
        return 1
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        sys.stdout.write(dumps_json({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    _emit(text, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
