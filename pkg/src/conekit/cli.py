"""Command line front end: every subcommand prints one canonical JSON document."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .cone import ConeError, PolyCone, StabilizerNontrivial, dirichlet_domain, tile_check
from .fixtures import Fixture, FixtureError, fixture_names, get_fixture, load_fixture
from .isometry import IsometryError
from .jsonio import dumps, rat
from .lattice import LatticeError
from .sampling import random_interiors
from .surface import (
    SurfaceError,
    classify_cone,
    curve_types,
    declared_minus_one_report,
    iitaka_case,
    minus_one_classes,
    mordell_weil_action,
    mordell_weil_group_data,
    zariski_decompose,
)

EXIT_OK, EXIT_INPUT, EXIT_UNCERTIFIED = 0, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def parse_vector(text: str) -> tuple:
    """'[1, -2, "1/3"]' or '1,-2,1/3'."""
    text = text.strip()
    try:
        items = json.loads(text) if text.startswith("[") else [t for t in text.split(",") if t.strip()]
        return la.vec(items)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse vector {text!r}: {exc}") from exc


def _fixture(args) -> Fixture:
    return load_fixture(args.fixture)


def _surface(args):
    fx = _fixture(args)
    if fx.surface is None:
        raise InputError(f"fixture {fx.name} has no surface data")
    return fx.surface


def _vec_arg(value, n: int, what: str) -> tuple:
    v = parse_vector(value)
    if len(v) != n:
        raise InputError(f"{what} has length {len(v)}, expected {n}")
    return v


def _plot_rays(lat, rays) -> list:
    a = lat.ample
    return [[rat(Fraction(x) / lat.pairing(a, r)) for x in r] for r in rays]


def cmd_pairing(args) -> tuple[dict, bool]:
    lat = _fixture(args).lattice
    u = _vec_arg(args.u, lat.rank, "u")
    v = _vec_arg(args.v, lat.rank, "v")
    return {"pairing": rat(la.to_fraction(lat.pairing(u, v)))}, True


def cmd_signature(args):
    lat = _fixture(args).lattice
    p, q = lat.signature()
    return {"signature": [p, q], "rank": lat.rank}, True


def _divisor(args, S):
    if args.divisor:
        return _vec_arg(args.divisor, S.rank, "divisor")
    return tuple(-x for x in S.K)


def cmd_zariski(args):
    S = _surface(args)
    D = _divisor(args, S)
    Z = zariski_decompose(S, D)
    doc = Z.to_json(S)
    doc["divisor"] = [rat(la.to_fraction(x)) for x in D]
    doc["iitaka"] = iitaka_case(S, Z)
    return doc, True


def cmd_neg_curves(args):
    S = _surface(args)
    res = minus_one_classes(S, args.degree_bound)
    doc = {"count": len(res.classes), "complete": res.complete, "degree_bound": res.degree_bound,
           "per_degree": list(res.per_degree)}
    if args.list:
        doc["classes"] = [list(c) for c in res.classes]
    return doc, res.complete


def cmd_types(args):
    S = _surface(args)
    Z = zariski_decompose(S, _divisor(args, S))
    ts = curve_types(S, Z)
    return {"count": len(ts), "support": [S.curves[i].name for i in Z.N_support],
            "coeffs": [rat(Fraction(a)) for a in Z.N_coeffs],
            "types": [list(t.lambdas) for t in ts],
            "declared_minus_one_curves": declared_minus_one_report(S, Z)}, True


def cmd_mw_action(args):
    S = _surface(args)
    data = mordell_weil_group_data(S)
    doc = {"group": data.to_json()}
    if args.x:
        x = _vec_arg(args.x, S.rank, "x")
        phi = mordell_weil_action(S, x)
        doc["matrix"] = [[rat(Fraction(a)) for a in row] for row in phi.matrix]
        if args.y:
            y = _vec_arg(args.y, S.rank, "y")
            img = phi(y)
            doc["image"] = [rat(Fraction(a)) for a in img]
            doc["image_norm"] = rat(Fraction(S.pairing(img, img)))
    return doc, True


def _dirichlet(args):
    fx = _fixture(args)
    if fx.group is None:
        raise InputError(f"fixture {fx.name} has no group")
    y = _vec_arg(args.basepoint, fx.lattice.rank, "basepoint") if args.basepoint else fx.basepoint
    if y is None:
        raise InputError("no basepoint given and the fixture has none")
    ambient = None
    if args.ambient:
        try:
            with open(args.ambient) as fh:
                ambient = PolyCone.from_json(fx.lattice, json.load(fh))
        except OSError as exc:
            raise InputError(f"cannot read ambient cone: {exc}") from exc
    res = dirichlet_domain(fx.lattice, fx.group, y, ambient=ambient, bound=args.bound, max_elements=args.budget)
    return fx, res


def cmd_dirichlet(args):
    fx, res = _dirichlet(args)
    doc = res.to_json()
    if args.emit_plot_data:
        doc["plot_data"] = {"rays": _plot_rays(fx.lattice, res.domain.rays)}
    return doc, res.certified


def cmd_tile_check(args):
    fx, res = _dirichlet(args)
    samples = random_interiors(fx.lattice, args.samples, seed=args.seed, centre=res.basepoint, spread=args.spread)
    rep = tile_check(res, fx.group, samples, word_budget=args.budget)
    doc = rep.to_json()
    doc["certified_domain"] = res.certified
    return doc, res.certified and rep.ok


def cmd_classify(args):
    S = _surface(args)
    bounds = [int(b) for b in args.bounds.split(",")]
    return classify_cone(S, bounds).to_json(), True


def cmd_fixtures(args):
    if args.action == "list":
        return {"fixtures": fixture_names()}, True
    if not args.name:
        raise InputError("fixtures show needs a fixture name")
    return get_fixture(args.name).summary(), True


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conekit", description="Exact Lorentzian lattice, Dirichlet domain and surface cone computations.")
    p.add_argument("--seed", type=int, default=0, help="seed for all sampling")
    p.add_argument("--budget", type=int, default=5000, help="cap on orbit sizes and walk lengths")
    p.add_argument("--output", help="write the JSON result here instead of standard output")
    p.add_argument("--require-certified", action="store_true", help="exit 3 when the result is not certified")
    p.add_argument("--emit-plot-data", action="store_true", help="add ray coordinates normalized by the ample class")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_fixture(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--fixture", required=True, help="packaged fixture name or JSON file")
        sp.set_defaults(func=func)
        return sp

    sp = with_fixture("pairing", cmd_pairing, "pairing <u, v>")
    sp.add_argument("--u", required=True)
    sp.add_argument("--v", required=True)
    with_fixture("signature", cmd_signature, "signature of the form")
    sp = with_fixture("zariski", cmd_zariski, "Zariski decomposition (default divisor -K)")
    sp.add_argument("--divisor")
    sp = with_fixture("neg-curves", cmd_neg_curves, "(-1)-classes up to a degree bound")
    sp.add_argument("--degree-bound", type=int, default=5)
    sp.add_argument("--list", action="store_true", help="include the classes")
    sp = with_fixture("types", cmd_types, "types of (-1)-curves against the negative part of -K")
    sp.add_argument("--divisor")
    sp = with_fixture("mw-action", cmd_mw_action, "Mordell-Weil group data and the action of x")
    sp.add_argument("--x")
    sp.add_argument("--y")
    for name, func in (("dirichlet", cmd_dirichlet), ("tile-check", cmd_tile_check)):
        sp = with_fixture(name, func, f"{name} for the fixture group")
        sp.add_argument("--basepoint")
        sp.add_argument("--bound", type=Fraction, help="initial cosh^2 radius of the orbit ball")
        sp.add_argument("--ambient", help="JSON cone {rays: [...]} or {facets: [...]} to cut the domain from")
        if name == "tile-check":
            sp.add_argument("--samples", type=int, default=200)
            sp.add_argument("--spread", type=int, default=8)
    sp = with_fixture("classify", cmd_classify, "rational polyhedrality of the nef cone")
    sp.add_argument("--bounds", default="3,4,5", help="comma separated degree bounds")
    sp = sub.add_parser("fixtures", help="list or show packaged fixtures")
    sp.add_argument("action", choices=["list", "show"])
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_fixtures)
    return p


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    output = None
    try:
        args = build_parser().parse_args(argv)
        output = args.output
        doc, certified = args.func(args)
    except (InputError, FixtureError, LatticeError, IsometryError, ConeError, SurfaceError,
            StabilizerNontrivial, ValueError, KeyError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        _emit(dumps(err), output)
        return EXIT_INPUT
    _emit(dumps(doc), output)
    if args.require_certified and not certified:
        return EXIT_UNCERTIFIED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
