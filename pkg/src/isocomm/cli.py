"""Command-line front end.

Polynomials are written in x and y with explicit ``*``, ``^`` for
nonnegative integer powers, and rational literals such as ``3/2``::

    isocomm bracket "-y" "x + 3*x*y + x^3" "x + x*y + x^3" "y - x^2 + y^2 - x^4"

Exit codes: 0 ok, 1 property false, 2 parse error, 3 precondition violated,
4 orbit did not close, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

from . import flow
from .catalog import CatalogEntry, catalog_by_id
from .centralizer import ZeroField, centralizer
from .field import (NotAreaPreserving, OriginNotFixed, VectorField, hamiltonian_from_area_preserving,
                    lie_bracket, orthogonal)
from .newton_abel import (NotOdd, PreconditionViolated, abel_partner, gen_lienard_isochronous,
                          generate_abel, homogeneous_perturbation)
from .parser import ParseError, parse_poly
from .portrait import Grid, GridSpecError, compute_orbits, orbits_csv, orbits_svg, singular_points, write_text
from .poly2 import format_poly
from .verify import run_claims

EXIT_OK, EXIT_FALSE, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NOT_CLOSED, EXIT_IO = range(6)

GRAMMAR_HELP = """polynomial grammar:
  expr   := term (('+' | '-') term)*
  term   := factor ('*' factor)*
  factor := '-' factor | atom ('^' uint)?
  atom   := rational | 'x' | 'y' | '(' expr ')'
  rational is an integer or a/b; multiplication must be explicit; -x^2 means -(x^2)
"""


class UsageError(Exception):
    """Bad command-line input that is not a polynomial parse error."""


def rational_str(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def field_json(F: VectorField) -> dict:
    return {"p": format_poly(F.p), "q": format_poly(F.q)}


def _parse_field(p: str, q: str) -> VectorField:
    return VectorField(parse_poly(p), parse_poly(q))


def _catalog_entry(cid: str) -> CatalogEntry:
    cat = catalog_by_id()
    if cid not in cat:
        raise UsageError(f"unknown catalog id {cid!r}; known: {', '.join(cat)}")
    return cat[cid]


def _field_arg(args, polys: Sequence[str]) -> VectorField:
    if args.catalog:
        if polys:
            raise UsageError("give either --catalog or two polynomials, not both")
        return _catalog_entry(args.catalog).system
    if len(polys) != 2:
        raise UsageError("expected two polynomials P Q (or --catalog ID)")
    return _parse_field(*polys)


def _emit(args, data, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


# -- subcommands ------------------------------------------------------------

def cmd_bracket(args) -> int:
    if args.catalog:
        if args.polys:
            raise UsageError("give either --catalog or four polynomials, not both")
        e = _catalog_entry(args.catalog)
        if e.claimed_partner is None:
            raise UsageError(f"catalog entry {e.id!r} has no claimed partner")
        F, G = e.system, e.claimed_partner
    else:
        if len(args.polys) != 4:
            raise UsageError("expected four polynomials P Q R S (or --catalog ID)")
        F, G = _parse_field(*args.polys[:2]), _parse_field(*args.polys[2:])
    B = lie_bracket(F, G)
    zero = B.is_zero()
    _emit(args, {"bracket": field_json(B), "commute": zero},
          f"[F, G] = {B}\n" + ("fields commute" if zero else "fields do not commute"))
    return EXIT_OK if zero else EXIT_FALSE


def cmd_centralizer(args) -> int:
    F = _field_arg(args, args.polys)
    if args.degree is not None and args.degree < 0:
        raise UsageError("--degree must be nonnegative")
    cb = centralizer(F, args.degree)
    data = {"degree_bound": cb.degree_bound, "dimension": cb.dimension,
            "basis": [field_json(G) for G in cb.basis]}
    lines = [f"degree bound {cb.degree_bound}, dimension {cb.dimension}"]
    lines += [f"  {G}" for G in cb.basis]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_gen(args) -> int:
    params: dict = {}
    if args.abel:
        try:
            a = Fraction(args.abel[0])
        except ValueError:
            raise UsageError(f"a must be a rational number, got {args.abel[0]!r}") from None
        h = parse_poly(args.abel[1])
        system, F = generate_abel(a, h)
        partner = abel_partner(system)
        params = {"generator": "abel", "a": rational_str(a), "h": format_poly(h)}
    elif args.lienard:
        q1 = parse_poly(args.lienard)
        F = gen_lienard_isochronous(q1).field
        partner = None
        params = {"generator": "lienard", "q1": format_poly(q1)}
    elif args.hamiltonian:
        u, v = (parse_poly(s) for s in args.hamiltonian)
        F, partner = hamiltonian_from_area_preserving(u, v)
        params = {"generator": "hamiltonian", "u": format_poly(u), "v": format_poly(v)}
    else:
        F = homogeneous_perturbation(args.homog)
        partner = None
        params = {"generator": "homogeneous", "m": args.homog}
    data = {**params, "system": field_json(F),
            "partner": field_json(partner) if partner is not None else None}
    text = f"x' = {format_poly(F.p)}\ny' = {format_poly(F.q)}"
    if partner is not None:
        text += f"\npartner: ({format_poly(partner.p)}, {format_poly(partner.q)})"
    _emit(args, data, text)
    return EXIT_OK


def _floats(s: str) -> list[float]:
    try:
        return [float(v) for v in s.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"cannot read numbers from {s!r}") from None


def cmd_probe(args) -> int:
    F = _field_arg(args, args.polys)
    center = tuple(args.center)
    amps = _floats(args.amplitudes)
    try:
        probe = flow.isochronicity_probe(F, center, amps, tol=args.tol, t_max=args.t_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = probe.max_deviation < args.threshold
    if args.csv:
        write_text(args.csv, "amplitude,period\n"
                   + "".join(f"{a:.17g},{p:.17g}\n" for a, p in probe.rows))
    data = {"center": list(probe.center),
            "rows": [{"amplitude": a, "period": p} for a, p in probe.rows],
            "max_deviation": probe.max_deviation, "threshold": args.threshold,
            "strictly_increasing": probe.strictly_increasing, "isochronous": ok}
    lines = ["amplitude  period"] + [f"{a:<10.6g} {p:.15g}" for a, p in probe.rows]
    lines.append(f"max deviation {probe.max_deviation:.3e} "
                 + ("(below" if ok else "(not below") + f" threshold {args.threshold:g})")
    if probe.strictly_increasing and len(probe.rows) > 1:
        lines.append("periods strictly increasing")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FALSE


def cmd_portrait(args) -> int:
    F = _field_arg(args, args.polys)
    grid = Grid.parse(args.grid)
    orbits = compute_orbits(F, grid, t_max=args.t_max, tol=args.tol)
    sing = singular_points(F, grid)
    if args.csv:
        write_text(args.csv, orbits_csv(orbits))
    if args.svg:
        write_text(args.svg, orbits_svg(orbits, grid, sing))
    data = {"orbits": len(orbits), "points": sum(len(o) for o in orbits),
            "singular_points": [list(p) for p in sing]}
    _emit(args, data, f"{len(orbits)} orbits, singular points: "
          + (", ".join(f"({x:.6g}, {y:.6g})" for x, y in sing) or "none"))
    return EXIT_OK


def cmd_defect(args) -> int:
    F = _field_arg(args, args.polys)
    G = orthogonal(F)
    A = tuple(args.point)
    sigma = flow.hitting_time(G, A, args.target_x, tol=args.tol)
    cd = flow.commutation_defect(F, G, A, args.tau, sigma, tol=args.tol)
    data = {"sigma": sigma, "tau": args.tau, "uv": list(cd.uv), "vu": list(cd.vu),
            "defect": cd.defect}
    _emit(args, data, f"sigma = {sigma:.15g}\nU_tau V_sigma (A) = ({cd.uv[0]:.12g}, {cd.uv[1]:.12g})\n"
          f"V_sigma U_tau (A) = ({cd.vu[0]:.12g}, {cd.vu[1]:.12g})\ndefect = {cd.defect:.12g}")
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    results = run_claims(seed=args.seed)
    failed = [r for r in results if not r.passed]
    if args.json:
        print(json.dumps([r.as_json() for r in results], indent=2))
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.claim}  [{r.citation}]  {r.metric}")
        print(f"{len(results) - len(failed)}/{len(results)} claims passed")
        for r in failed:
            print(f"failed: {r.claim} [{r.citation}]", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_FALSE


# -- parser -------------------------------------------------------------------

def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    parser.add_argument("--tol", type=float, default=d(1e-12), help="integrator tolerance (default 1e-12)")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for randomized checks (default 0)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isocomm", description=__doc__.split("\n\n")[0],
                                 epilog=GRAMMAR_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    _global_flags(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_, epilog=GRAMMAR_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("bracket", cmd_bracket, "Lie bracket of (P, Q) and (R, S); exit 0 iff it vanishes")
    p.add_argument("polys", nargs="*", metavar="POLY", help="P Q R S")
    p.add_argument("--catalog", metavar="ID", help="use a catalog system and its claimed partner")

    p = add("centralizer", cmd_centralizer, "basis of commuting fields up to a degree bound")
    p.add_argument("polys", nargs="*", metavar="POLY", help="P Q")
    p.add_argument("--catalog", metavar="ID")
    p.add_argument("--degree", type=int, help="degree bound (default: degree of the field)")

    p = add("gen", cmd_gen, "generate an isochronous system and its partner")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--abel", nargs=2, metavar=("A", "H"), help="rational a and polynomial h(x)")
    g.add_argument("--lienard", metavar="Q1", help="odd polynomial q1(x)")
    g.add_argument("--hamiltonian", nargs=2, metavar=("U", "V"), help="area-preserving map (u, v)")
    g.add_argument("--homog", type=int, metavar="M", help="homogeneous perturbation order m >= 1")

    p = add("probe", cmd_probe, "measure periods at several amplitudes")
    p.add_argument("polys", nargs="*", metavar="POLY", help="P Q")
    p.add_argument("--catalog", metavar="ID")
    p.add_argument("--center", type=float, nargs=2, default=[0.0, 0.0], metavar=("CX", "CY"))
    p.add_argument("--amplitudes", default="0.1,0.2,0.3,0.4", help="comma-separated, increasing")
    p.add_argument("--csv", metavar="PATH", help="write amplitude,period rows")
    p.add_argument("--threshold", type=float, default=1e-6, help="isochronicity threshold (default 1e-6)")
    p.add_argument("--t-max", type=float, default=1000.0, help="give up on an orbit after this time")

    p = add("portrait", cmd_portrait, "integrate seeded orbits and write CSV/SVG")
    p.add_argument("polys", nargs="*", metavar="POLY", help="P Q")
    p.add_argument("--catalog", metavar="ID")
    p.add_argument("--grid", default="-2:2:-2:2:25", help="xmin:xmax:ymin:ymax:n_orbits")
    p.add_argument("--svg", metavar="PATH")
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--t-max", type=float, default=10.0, help="integration time each way")

    p = add("defect", cmd_defect, "compare U_tau V_sigma and V_sigma U_tau for F and its orthogonal field")
    p.add_argument("polys", nargs="*", metavar="POLY", help="P Q (default: the iz(1-z^2) field)")
    p.add_argument("--catalog", metavar="ID")
    p.add_argument("--point", type=float, nargs=2, default=[0.5, 0.0], metavar=("AX", "AY"))
    p.add_argument("--target-x", type=float, default=0.8, help="abscissa of B, which fixes sigma")
    p.add_argument("--tau", type=float, default=math.pi)

    add("verify-paper", cmd_verify_paper, "run every published check and report pass/fail")
    return ap


def _protect_negatives(argv: Sequence[str]) -> list[str]:
    """Keep argparse from reading expressions such as ``-y`` or ``-1:1:-1:1:9`` as options.

    A leading space turns them into plain values; the parser skips whitespace.
    """
    return [" " + a if a.startswith("-") and not a.startswith("--") and a != "-h" else a
            for a in argv]


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(_protect_negatives(sys.argv[1:] if argv is None else argv))
    if args.command == "defect" and not args.polys and not args.catalog:
        args.catalog = "holomorphic-iz(1-z^2)"
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ZeroField as exc:
        print(f"ZeroField: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, GridSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotOdd, NotAreaPreserving, OriginNotFixed, PreconditionViolated, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (flow.AnyOrbitNotClosed, flow.NotClosed) as exc:
        print(f"orbit did not close: {exc}", file=sys.stderr)
        return EXIT_NOT_CLOSED
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
