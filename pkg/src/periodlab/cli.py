"""Command-line front end: ``periodlab <subcommand> [options]``.

Results go to stdout as JSON (default) or TSV. Errors go to stderr as a
single line ``error[CODE]: message``; usage errors exit with 2, domain errors
with 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .exactnum import format_rational, model_field, parse_rational, variables_in
from .fundcomplex import (
    StalkSelector,
    assemble_fundamental_complex,
    build_finite_flag_model,
    homology_dims,
)
from .isocrystal import (
    FilteredIsocrystal,
    NotPhiStable,
    SearchConfig,
    UnsupportedConfiguration,
    drinfeld_filtered_isocrystal,
    drinfeld_membership,
    hn_filtration,
    hn_invariants,
    is_weakly_admissible,
)
from .periodcoh import (
    DegreeFunction,
    DegreeRuleError,
    PeriodDatum,
    calibrate_degree_function,
    cohomology_table,
    drinfeld_datum,
    duality_report,
    flag_dimension,
    flag_dimension_diagnostic,
    steinberg_dimension,
    table_caveats,
)
from .polygons import hodge_polygon, newton_polygon_from_charpoly, polygon_compare, polygon_from_slopes
from .rootdata import CapacityError, RootDatum, kostant_representatives

HEIGHT_ENV = "PERIODLAB_HEIGHT"
DEFAULT_HEIGHT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# input helpers


def _load_json(args) -> dict:
    if args.file and args.data:
        raise UsageError("give either --file or --data, not both")
    if args.file:
        try:
            text = Path(args.file).read_text()
        except OSError as e:
            raise UsageError(f"cannot read {args.file}: {e.strerror}")
    elif args.data:
        text = args.data
    else:
        raise UsageError("an input datum is required (--file or --data)")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"input is not valid JSON: {e.msg} at line {e.lineno}")


def _csv(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _height(args) -> int:
    if args.height is not None:
        h = args.height
    else:
        env = os.environ.get(HEIGHT_ENV)
        if env is None:
            return DEFAULT_HEIGHT
        try:
            h = int(env)
        except ValueError:
            raise UsageError(f"{HEIGHT_ENV}={env!r} is not an integer")
    if h < 1:
        raise UsageError("height bound must be at least 1")
    return h


def _config(args) -> SearchConfig:
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    return SearchConfig(_height(args), args.workers)


def _root_set(text: str, n: int) -> frozenset:
    """Parse ``a1,a3`` (or ``1,3``) into 0-based simple root indices."""
    out = set()
    for tok in _csv(text):
        tok = tok.lower().lstrip("a")
        if not tok.isdigit() or not 1 <= int(tok) <= n - 1:
            raise UsageError(f"{tok!r} is not a simple root of GL_{n}")
        out.add(int(tok) - 1)
    return frozenset(out)


def _rationals(text: str) -> list:
    try:
        return [parse_rational(x) for x in _csv(text)]
    except ValueError as e:
        raise UsageError(str(e))


def _labels(I) -> str:
    return ",".join(f"a{i + 1}" for i in sorted(I)) or "-"


def _fr(xs) -> list[str]:
    return [format_rational(x) for x in xs]


# ---------------------------------------------------------------------------
# subcommands; each returns (json object, tsv rows)


def cmd_polygon(args):
    if args.matrix is not None:
        if args.p is None:
            raise UsageError("--matrix needs --p")
        try:
            b = [[parse_rational(x) for x in row] for row in json.loads(args.matrix)]
        except (json.JSONDecodeError, TypeError) as e:
            raise UsageError(f"--matrix must be a JSON list of rows: {e}")
        poly = newton_polygon_from_charpoly(b, args.p)
        return {"kind": "newton", "vertices": poly.to_json()}, _vertex_rows(poly)
    if args.slopes is not None:
        poly = polygon_from_slopes(_rationals(args.slopes))
        return {"kind": "newton", "vertices": poly.to_json()}, _vertex_rows(poly)
    if args.type is not None:
        pairs = []
        for tok in _csv(args.type):
            jump, _, mult = tok.partition(":")
            try:
                pairs.append((parse_rational(jump), int(mult or 1)))
            except ValueError as e:
                raise UsageError(f"bad type entry {tok!r}: {e}")
        poly = hodge_polygon(pairs)
        return {"kind": "hodge", "vertices": poly.to_json()}, _vertex_rows(poly)
    fi = FilteredIsocrystal.from_json(_load_json(args))
    newton, hodge = fi.newton_polygon(), fi.hodge_polygon()
    above, same_end = polygon_compare(newton, hodge)
    obj = {
        "newton": newton.to_json(),
        "hodge": hodge.to_json(),
        "newton_on_or_above_hodge": above,
        "endpoints_equal": same_end,
    }
    rows = [["x", "newton", "hodge"]]
    for x in range(fi.n + 1):
        rows.append([str(x), format_rational(newton(x)), format_rational(hodge(x))])
    rows.append(["above", str(above).lower(), ""])
    rows.append(["same_endpoint", str(same_end).lower(), ""])
    return obj, rows


def _vertex_rows(poly):
    return [["x", "y"]] + [[format_rational(x), format_rational(y)] for x, y in poly.vertices]


def cmd_admissible(args):
    fi = FilteredIsocrystal.from_json(_load_json(args))
    verdict = is_weakly_admissible(fi, _config(args))
    obj = verdict.to_json()
    obj["datum"] = fi.to_json()
    rows = [["verdict", "total_degree", "degree", "violated_by"]]
    rows.append([
        obj["verdict"],
        obj["total_degree"],
        obj["degree"] or "-",
        json.dumps(obj["violated_by"]) if obj["violated_by"] else "-",
    ])
    return obj, rows


def cmd_hn(args):
    fi = FilteredIsocrystal.from_json(_load_json(args))
    report = hn_filtration(fi, _config(args))
    rank, deg, slope = hn_invariants(fi)
    obj = report.to_json()
    obj["total"] = {"rank": rank, "degree": format_rational(deg), "slope": format_rational(slope)}
    obj["semistable"] = report.is_semistable()
    obj["datum"] = fi.to_json()
    rows = [["step", "rank", "degree", "slope", "basis"]]
    for i, p in enumerate(obj["pieces"], start=1):
        rows.append([str(i), str(p["rank"]), p["degree"], p["slope"], json.dumps(p["basis"])])
    return obj, rows


def cmd_drinfeld(args):
    coords_text = _csv(args.coords)
    if not coords_text:
        raise UsageError("--coords needs at least one coordinate")
    K = model_field(*variables_in(coords_text))
    coords = [K.parse(x) for x in coords_text]
    member = drinfeld_membership(coords)
    fi = drinfeld_filtered_isocrystal(coords)
    verdict = is_weakly_admissible(fi, _config(args))
    obj = {
        "coords": [str(c) for c in coords],
        "member": member,
        "weakly_admissible": verdict.admissible,
        "agree": member == verdict.admissible,
        "height_bound": verdict.height_bound,
        "datum": fi.to_json(),
    }
    rows = [["coords", "member", "weakly_admissible", "agree"]]
    rows.append([",".join(obj["coords"]), str(member).lower(), str(verdict.admissible).lower(),
                 str(obj["agree"]).lower()])
    return obj, rows


def cmd_kostant(args):
    rd = RootDatum(args.n)
    mu = _rationals(args.mu)
    reps = kostant_representatives(rd, mu)
    items = [{"w": str(w), "length": w.length, "w_mu": _fr(w.act(mu))} for w in reps]
    obj = {"n": args.n, "mu": _fr(mu), "representatives": items}
    rows = [["w", "length", "w_mu"]] + [[i["w"], str(i["length"]), ",".join(i["w_mu"])] for i in items]
    return obj, rows


def _period_datum(args) -> PeriodDatum:
    if args.file or args.data:
        return PeriodDatum.from_json(_load_json(args))
    if args.n is None or args.mu is None:
        raise UsageError("give a datum with --file/--data or with --n and --mu")
    nu = _rationals(args.nu_b) if args.nu_b else [0] * args.n
    galois = [int(x) for x in _csv(args.galois)] if args.galois else None
    return PeriodDatum(RootDatum(args.n), tuple(_rationals(args.mu)), tuple(nu), args.s, galois)


def _degree_rule(args) -> DegreeFunction:
    if args.rule:
        parts = _csv(args.rule)
        if len(parts) != 3:
            raise UsageError("--rule takes three integers a,b,c")
        try:
            return DegreeFunction(*map(int, parts), tag="user")
        except ValueError:
            raise UsageError("--rule takes three integers a,b,c")
    return calibrate_degree_function(3)


def cmd_cohomology(args):
    pd = _period_datum(args)
    rule = _degree_rule(args)
    table = cohomology_table(pd, rule)
    d = flag_dimension(pd.rd, pd.mu)
    obj = {
        "datum": pd.to_json(),
        "d": d,
        "rule": {"a": rule.a, "b": rule.b, "c": rule.c, "tag": rule.tag},
        "summands": [s.to_json() for s in table],
        "caveats": table_caveats(pd, table),
    }
    if args.diagnostic:
        obj["dimension_diagnostic"] = {
            k: (format_rational(v) if not isinstance(v, int) else v)
            for k, v in flag_dimension_diagnostic(pd.rd, pd.mu, pd.nu_b).items()
        }
    rows = [["degree", "I_set", "orbit_size", "l", "rho_twist", "overall_twist", "description"]]
    for s in table:
        rows.append([str(s.cohomological_degree), _labels(s.I_set), str(s.orbit_size), str(s.l_orbit),
                     str(s.rho_twist), str(s.overall_twist), s.description])
    return obj, rows


def cmd_calibrate(args):
    rule = calibrate_degree_function(args.n_max)
    obj = {"n_max": args.n_max, "a": rule.a, "b": rule.b, "c": rule.c, "rule": str(rule)}
    return obj, [["a", "b", "c", "rule"], [str(rule.a), str(rule.b), str(rule.c), str(rule)]]


def cmd_steinberg_dim(args):
    I = _root_set(args.I, args.n)
    dim = steinberg_dimension(args.n, args.q, I)
    obj = {"n": args.n, "q": args.q, "I": [f"a{i + 1}" for i in sorted(I)], "dimension": dim}
    return obj, [["n", "q", "I", "dimension"], [str(args.n), str(args.q), _labels(I), str(dim)]]


def cmd_complex_check(args):
    m = build_finite_flag_model(args.n, args.q)
    sel = StalkSelector.full(m) if args.selector == "full" else StalkSelector.singleton(m)
    c = assemble_fundamental_complex(m, sel, args.coeff_dim)
    h = homology_dims(c)
    top = steinberg_dimension(args.n, args.q, frozenset()) * args.coeff_dim if args.selector == "full" else 0
    expected = [0] * (len(h) - 1) + [top]
    obj = {
        "n": args.n,
        "q": args.q,
        "selector": args.selector,
        "dims": list(c.dims),
        "homology": h,
        "exact_except": [k for k, x in enumerate(h) if x],
        "expected_homology": expected,
        "d_squared_zero": c.d_squared_vanishes(),
        "matches": h == expected,
    }
    rows = [["degree", "dim", "homology", "expected"]]
    rows += [[str(k), str(c.dims[k]), str(h[k]), str(expected[k])] for k in range(len(h))]
    return obj, rows


def cmd_duality(args):
    if args.d is not None:
        pd = drinfeld_datum(args.d)
    else:
        pd = _period_datum(args)
    rule = _degree_rule(args)
    table = cohomology_table(pd, rule)
    d = flag_dimension(pd.rd, pd.mu)
    report = duality_report(table, d, args.q)
    obj = report.to_json()
    obj["datum"] = pd.to_json()
    rows = [["degree", "dual_degree", "I_set", "orbit_size", "dimension"]]
    for p in report.pairs:
        rows.append([str(p["degree"]), str(p["dual_degree"]), ",".join(p["I_set"]) or "-",
                     str(p["orbit_size"]), str(p.get("dimension", "-"))])
    return obj, rows


# ---------------------------------------------------------------------------


def _datum_args(p):
    p.add_argument("--file", help="path to a JSON datum")
    p.add_argument("--data", help="inline JSON datum")


def _search_args(p):
    p.add_argument("--height", type=int, default=None,
                   help=f"height bound for subspace search (default ${HEIGHT_ENV} or {DEFAULT_HEIGHT})")
    p.add_argument("--workers", type=int, default=1, help="processes for the subspace enumeration")


def _period_args(p):
    _datum_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--mu", help="dominant cocharacter, e.g. 2,-1,-1")
    p.add_argument("--nu-b", dest="nu_b", help="central slope vector (default 0)")
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--galois", help="permutation of the Kostant representatives, e.g. 0,2,1")
    p.add_argument("--rule", help="degree rule a,b,c for n = a*l + b*d + c (default: calibrated)")


def _format_args(p, default):
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default=default,
                     help="JSON output (default)")
    fmt.add_argument("--tsv", dest="fmt", action="store_const", const="tsv", default=default,
                     help="TSV output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="periodlab", description="Period domain combinatorics over exact fields.")
    _format_args(parser, argparse.SUPPRESS)
    parser.set_defaults(fmt="json")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    common = _Parser(add_help=False)
    _format_args(common, argparse.SUPPRESS)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    p = sub.add_parser("polygon", help="Newton/Hodge polygons")
    _datum_args(p)
    p.add_argument("--slopes", help="Newton polygon from slopes")
    p.add_argument("--type", help="Hodge polygon from jump:multiplicity pairs")
    p.add_argument("--matrix", help="Newton polygon of b*sigma, b as JSON rows")
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_polygon)

    for name, func, text in (("admissible", cmd_admissible, "weak admissibility verdict"),
                             ("hn", cmd_hn, "Harder-Narasimhan filtration")):
        p = sub.add_parser(name, help=text)
        _datum_args(p)
        _search_args(p)
        p.set_defaults(func=func)

    p = sub.add_parser("drinfeld", help="Drinfeld membership vs weak admissibility")
    p.add_argument("--coords", required=True, help="homogeneous coordinates, e.g. 1,t")
    _search_args(p)
    p.set_defaults(func=cmd_drinfeld)

    p = sub.add_parser("kostant", help="Kostant representatives")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", required=True)
    p.set_defaults(func=cmd_kostant)

    p = sub.add_parser("cohomology", help="cohomology summand table")
    _period_args(p)
    p.add_argument("--diagnostic", action="store_true", help="also report both dimension conventions")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("calibrate", help="calibrate the degree rule on Drinfeld data")
    p.add_argument("--n-max", dest="n_max", type=int, default=3)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("steinberg-dim", help="generalized Steinberg dimension on the finite model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--I", default="", help="simple roots, e.g. a1,a2 (default: empty)")
    p.set_defaults(func=cmd_steinberg_dim)

    p = sub.add_parser("complex-check", help="homology of the fundamental complex")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--selector", choices=("full", "singleton"), default="full")
    p.add_argument("--coeff-dim", dest="coeff_dim", type=int, default=1)
    p.set_defaults(func=cmd_complex_check)

    p = sub.add_parser("duality", help="duality bookkeeping for a cohomology table")
    _period_args(p)
    p.add_argument("--d", type=int, help="use the Drinfeld datum of dimension d")
    p.add_argument("--q", type=int, help="finite field size for dimension bookkeeping")
    p.set_defaults(func=cmd_duality)
    return parser


def _render(obj, rows, fmt: str) -> str:
    if fmt == "tsv":
        return "".join("\t".join(r) + "\n" for r in rows)
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _fail(code: str, message: str, status: int) -> int:
    first = " ".join(str(message).split())
    print(f"error[{code}]: {first}", file=sys.stderr)
    return status


def run(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        sys.stderr.write(parser.format_usage())
        return _fail("USAGE", "no subcommand given", 2)
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            sys.stderr.write(parser.format_usage())
            return _fail("USAGE", "no subcommand given", 2)
        obj, rows = args.func(args)
    except UsageError as e:
        return _fail("USAGE", e, 2)
    except CapacityError as e:
        return _fail("CAPACITY", e, 1)
    except UnsupportedConfiguration as e:
        return _fail("UNSUPPORTED", e, 1)
    except NotPhiStable as e:
        return _fail("NOT_PHI_STABLE", e, 1)
    except DegreeRuleError as e:
        return _fail("DEGREE_RULE", e, 1)
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as e:
        return _fail("INVALID_DATUM", e, 1)
    sys.stdout.write(_render(obj, rows, args.fmt))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
