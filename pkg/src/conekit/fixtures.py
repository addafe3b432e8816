"""Packaged example lattices, groups and surfaces.

Each fixture validates its data on construction (lattice signature, isometry
checks, K + Delta) and carries a table of known answers that
:meth:`Fixture.self_test` recomputes.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import linalg as la
from .enumeration import slice_classes
from .isometry import GroupGens
from .lattice import LorentzLattice, diagonal_lattice
from .surface import Curve, SurfaceData


class FixtureError(ValueError):
    pass


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    lattice: LorentzLattice
    surface: SurfaceData | None = None
    group: GroupGens | None = None
    basepoint: tuple | None = None
    expected: dict = field(default_factory=dict)

    def self_test(self) -> dict[str, bool]:
        """Recompute every expected answer; returns {check name: passed}."""
        out = {}
        for key, want in self.expected.items():
            if key not in _CHECKS:
                raise FixtureError(f"fixture {self.name} expects an unknown check {key!r}")
            out[key] = _matches(_CHECKS[key](self), want)
        return out

    def summary(self) -> dict:
        doc = {"name": self.name, "description": self.description, "lattice": self.lattice.to_json()}
        if self.surface is not None:
            doc["surface"] = self.surface.to_json()
        if self.group is not None:
            doc["generators"] = self.group.to_json()["generators"]
        if self.basepoint is not None:
            doc["basepoint"] = list(self.basepoint)
        doc["expected"] = {k: v for k, v in self.expected.items()}
        return doc


def _matches(got, want) -> bool:
    if isinstance(want, (list, tuple)) and isinstance(got, (list, tuple)):
        return list(got) == list(want)
    return got == want


# known-answer checks, evaluated lazily so that loading stays cheap


def _check_signature(f: Fixture):
    return list(f.lattice.signature())


def _check_minus_one_count(f: Fixture):
    from .surface import minus_one_classes

    return len(minus_one_classes(f.surface, 3).classes)


def _check_dirichlet(f: Fixture):
    from .cone import dirichlet_domain

    r = dirichlet_domain(f.lattice, f.group, f.basepoint)
    return {"certified": r.certified, "facets": [list(x) for x in r.domain.facets],
            "rays": [list(x) for x in r.domain.rays], "isotropic_rays": len(r.boundary_rational_rays)}


def _check_dirichlet_isotropic(f: Fixture):
    d = _check_dirichlet(f)
    return d["certified"] and d["isotropic_rays"] >= 1


def _check_mw_rank(f: Fixture):
    from .surface import mordell_weil_group_data

    return mordell_weil_group_data(f.surface).rank


def _check_classify(f: Fixture):
    from .surface import classify_cone

    return classify_cone(f.surface).verdict


def _check_iitaka(f: Fixture):
    from .surface import iitaka_case, zariski_decompose

    minus_k = tuple(-x for x in f.surface.K)
    return iitaka_case(f.surface, zariski_decompose(f.surface, minus_k))


def _check_types(f: Fixture):
    from .surface import curve_types, zariski_decompose

    minus_k = tuple(-x for x in f.surface.K)
    return len(curve_types(f.surface, zariski_decompose(f.surface, minus_k)))


def _check_ample_positive(f: Fixture):
    return f.lattice.norm(f.lattice.ample) > 0


_CHECKS: dict[str, Callable[[Fixture], object]] = {
    "signature": _check_signature,
    "ample_positive": _check_ample_positive,
    "minus_one_count": _check_minus_one_count,
    "dirichlet": _check_dirichlet,
    "dirichlet_isotropic_vertex": _check_dirichlet_isotropic,
    "mordell_weil_rank": _check_mw_rank,
    "classify": _check_classify,
    "iitaka": _check_iitaka,
    "curve_types": _check_types,
}


# ---------------------------------------------------------------------------
# Pell


def fixture_pell() -> Fixture:
    lat = LorentzLattice([[1, 0], [0, -2]], [1, 0])
    group = GroupGens(lat, ([[3, 4], [2, 3]],))
    return Fixture(
        "pell",
        "x^2 - 2y^2 with the fundamental unit 3 + 2 sqrt 2 acting; basepoint (1, 0)",
        lat,
        group=group,
        basepoint=(1, 0),
        expected={
            "signature": [1, 1],
            "dirichlet": {"certified": True, "facets": [[1, -1], [1, 1]], "rays": [[2, -1], [2, 1]],
                          "isotropic_rays": 0},
        },
    )


# ---------------------------------------------------------------------------
# Eisenstein integers a + b w with w^2 = -1 - w, for the Hermitian model


def _emul(x, y):
    a, b = x
    c, d = y
    return (a * c - b * d, a * d + b * c - b * d)


def _eadd(x, y):
    return (x[0] + y[0], x[1] + y[1])


def _econj(x):
    return (x[0] - x[1], -x[1])


def _herm(a, d, u, v):
    return [[(a, 0), (u, v)], [_econj((u, v)), (d, 0)]]


def _emat_mul(p, q):
    return [[_eadd(_emul(p[i][0], q[0][j]), _emul(p[i][1], q[1][j])) for j in range(2)] for i in range(2)]


def _estar(p):
    return [[_econj(p[j][i]) for j in range(2)] for i in range(2)]


def _hermitian_coords(m) -> tuple:
    return (m[0][0][0], m[1][1][0], m[0][1][0], m[0][1][1])


def hermitian_action(g) -> tuple:
    """Matrix of M -> g M g* on Hermitian M = [[a, b], [conj b, d]], b = u + v w, coordinates (a, d, u, v)."""
    cols = []
    for basis in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
        cols.append(_hermitian_coords(_emat_mul(_emat_mul(g, _herm(*basis)), _estar(g))))
    return tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))


HESSE_GRAM = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -2, 1), (0, 0, 1, -2))
HESSE_BASEPOINT = (5, 7, 1, 3)


def fixture_hesse() -> Fixture:
    """The rank-4 lattice of the Hesse quotient surface, with PGL(2, Z[w]) acting.

    Hermitian 2x2 matrices over Z[w] with M^2 = 2 det M. The generators are
    the images of [[1,1],[0,1]], [[1,w],[0,1]], [[0,-1],[1,0]] and
    diag(-w, 1), which generate GL(2, Z[w]); scalars act trivially. Elements
    of the automorphism group acting trivially on this lattice are not
    modelled.
    """
    lat = LorentzLattice(HESSE_GRAM, (1, 1, 0, 0))
    one, w, zero, m1 = (1, 0), (0, 1), (0, 0), (-1, 0)
    mats = [
        [[one, one], [zero, one]],
        [[one, w], [zero, one]],
        [[zero, m1], [one, zero]],
        [[(0, -1), zero], [zero, one]],
    ]
    group = GroupGens(lat, tuple(hermitian_action(g) for g in mats))
    surface = SurfaceData(lat, (0, 0, 0, 0), (), (), {"klt_calabi_yau": True})
    return Fixture(
        "hesse-y",
        "rank-4 round nef cone; Hermitian matrices over Z[w] with PGL(2, Z[w]) acting",
        lat,
        surface=surface,
        group=group,
        basepoint=HESSE_BASEPOINT,
        expected={"signature": [1, 3], "ample_positive": True, "dirichlet_isotropic_vertex": True},
    )


def hesse_lines() -> list[list[int]]:
    """Point indices (0-based among 12) on each of the 9 lines through 4 of the 12 points.

    Points 0, 1, 2 are [1,0,0], [0,1,0], [0,0,1]; point 3 + 3i + j is [1, w^i, w^j].
    """
    lines = []
    for m in range(3):
        lines.append([0] + [3 + 3 * i + j for i in range(3) for j in range(3) if (j - i) % 3 == m])
        lines.append([1] + [3 + 3 * i + j for i in range(3) for j in range(3) if j == m])
        lines.append([2] + [3 + 3 * i + j for i in range(3) for j in range(3) if i == m])
    return lines


def fixture_hesse_blowup() -> Fixture:
    lat = diagonal_lattice(1, 12, [5] + [-1] * 12)
    K = (-3,) + (1,) * 12
    curves = []
    for k, pts in enumerate(hesse_lines()):
        cls = [1] + [0] * 12
        for p in pts:
            cls[1 + p] = -1
        curves.append(Curve(f"line-{k + 1}", tuple(cls)))
    for i in range(12):
        curves.append(Curve(f"e{i + 1}", tuple(int(j == i + 1) for j in range(13))))
    delta = tuple((k, Fraction(1, 3)) for k in range(9))
    surface = SurfaceData(lat, K, tuple(curves), delta,
                          {"rational_surface": True, "anti_K_effective": True, "klt_calabi_yau": True})
    return Fixture(
        "hesse-x",
        "P^2 blown up at the 12 points of the dual Hesse configuration; nine disjoint (-3)-lines",
        lat,
        surface=surface,
        expected={"signature": [1, 12], "iitaka": "zero", "curve_types": 165},
    )


# ---------------------------------------------------------------------------
# blow-ups of the plane


def _blowup_lattice(r: int, ample) -> LorentzLattice:
    return diagonal_lattice(1, r, ample)


def _canonical(r: int) -> tuple:
    return (-3,) + (1,) * r


def fixture_del_pezzo(r: int) -> Fixture:
    if not 1 <= r <= 8:
        raise FixtureError("del Pezzo fixtures exist for 1 <= r <= 8")
    K = _canonical(r)
    minus_k = tuple(-x for x in K)
    lat = _blowup_lattice(r, minus_k)
    classes = slice_classes(lat, minus_k, 1, -1)
    curves = [Curve(f"E{k + 1}", c) for k, c in enumerate(classes)]
    curves += [Curve("anticanonical-1", minus_k), Curve("anticanonical-2", minus_k)]
    n = len(classes)
    delta = ((n, Fraction(1, 2)), (n + 1, Fraction(1, 2)))
    surface = SurfaceData(lat, K, tuple(curves), delta,
                          {"rational_surface": True, "anti_K_effective": True, "klt_calabi_yau": True})
    counts = {1: 1, 2: 3, 3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}
    expected = {"signature": [1, r], "minus_one_count": counts[r], "iitaka": "two"}
    if r == 6:
        expected["classify"] = "PolyhedralCertified"
    return Fixture(f"del-pezzo-{r}", f"P^2 blown up at {r} general points, ample class -K", lat,
                   surface=surface, expected=expected)


def _e9_curves() -> list[Curve]:
    return [Curve(f"e{i}", tuple(int(j == i) for j in range(10))) for i in range(1, 10)]


def fixture_e1() -> Fixture:
    K = _canonical(9)
    minus_k = tuple(-x for x in K)
    lat = _blowup_lattice(9, (4,) + (-1,) * 9)
    curves = [Curve("fiber-1", minus_k, True), Curve("fiber-2", minus_k, True)] + _e9_curves()
    delta = ((0, Fraction(1, 2)), (1, Fraction(1, 2)))
    declares = {"rational_surface": True, "anti_K_effective": True, "klt_calabi_yau": True,
                "fibration": {"P": minus_k, "a": 1, "b": 1}}
    surface = SurfaceData(lat, K, tuple(curves), delta, declares)
    return Fixture("e1", "rational elliptic surface with no reducible fibers; sections e1..e9", lat,
                   surface=surface,
                   expected={"signature": [1, 9], "mordell_weil_rank": 8, "iitaka": "one",
                             "classify": "NotPolyhedralWithinBound"})


def fixture_bl9() -> Fixture:
    K = _canonical(9)
    minus_k = tuple(-x for x in K)
    lat = _blowup_lattice(9, (4,) + (-1,) * 9)
    curves = [Curve("cubic", minus_k)] + _e9_curves()
    # the only anticanonical curve is the cubic, so no boundary with coefficients below 1 exists
    declares = {"rational_surface": True, "anti_K_effective": True, "klt_calabi_yau": False,
                "log_canonical_boundary": "cubic with coefficient 1"}
    surface = SurfaceData(lat, K, tuple(curves), (), declares)
    return Fixture("bl9", "P^2 blown up at 9 very general points", lat, surface=surface,
                   expected={"signature": [1, 9], "classify": "NotPolyhedralWithinBound"})


def fixture_hirzebruch2() -> Fixture:
    """F_2 in the basis (C, F): C the (-2)-section, F a fiber."""
    lat = LorentzLattice([[-2, 1], [1, 0]], [1, 3])
    K = (-2, -4)
    curves = [Curve("C", (1, 0)), Curve("F", (0, 1)), Curve("D1", (2, 4)), Curve("D2", (2, 4))]
    delta = ((2, Fraction(1, 2)), (3, Fraction(1, 2)))
    surface = SurfaceData(lat, K, tuple(curves), delta,
                          {"rational_surface": True, "anti_K_effective": True, "klt_calabi_yau": True})
    return Fixture("hirzebruch-2", "Hirzebruch surface F_2 with its negative section and a fiber", lat,
                   surface=surface, expected={"signature": [1, 1], "classify": "PolyhedralCertified"})


def fixture_bl2() -> Fixture:
    """P^2 blown up at two points; nef cone spanned by h, h - e1, h - e2."""
    lat = diagonal_lattice(1, 2, (3, -1, -1))
    K = (-3, 1, 1)
    curves = [Curve("e1", (0, 1, 0)), Curve("e2", (0, 0, 1)), Curve("l12", (1, -1, -1))]
    surface = SurfaceData(lat, K, tuple(curves), (), {"rational_surface": True, "anti_K_effective": True})
    return Fixture("bl2", "P^2 blown up at two points", lat, surface=surface, expected={"signature": [1, 2]})


_BUILDERS: dict[str, Callable[[], Fixture]] = {
    "pell": fixture_pell,
    "hesse-y": fixture_hesse,
    "hesse-x": fixture_hesse_blowup,
    **{f"del-pezzo-{r}": (lambda r=r: fixture_del_pezzo(r)) for r in range(1, 9)},
    "e1": fixture_e1,
    "bl9": fixture_bl9,
    "hirzebruch-2": fixture_hirzebruch2,
    "bl2": fixture_bl2,
}


def fixture_names() -> list[str]:
    return list(_BUILDERS)


_CACHE: dict[str, Fixture] = {}
_VERIFIED: set[str] = set()


def get_fixture(name: str, verify: bool = True) -> Fixture:
    """Build (once) and, unless verify is False, self-test a packaged fixture."""
    if name not in _BUILDERS:
        raise FixtureError(f"unknown fixture {name!r}; known: {', '.join(_BUILDERS)}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    fx = _CACHE[name]
    if verify and name not in _VERIFIED:
        failed = [k for k, ok in fx.self_test().items() if not ok]
        if failed:
            raise FixtureError(f"fixture {name} failed its self-test: {', '.join(failed)}")
        _VERIFIED.add(name)
    return fx


def fixture_from_json(doc: dict, name: str = "custom") -> Fixture:
    """A surface document (lattice, K, ...) or a lattice document, optionally with generators."""
    if "K" in doc:
        surface = SurfaceData.from_json(doc)
        lat = surface.lattice
    elif "lattice" in doc:
        surface = None
        lat = LorentzLattice.from_json(doc["lattice"])
    else:
        surface = None
        lat = LorentzLattice.from_json(doc)
    group = GroupGens.from_json(lat, doc) if "generators" in doc else None
    base = la.vec(doc["basepoint"]) if "basepoint" in doc else None
    return Fixture(doc.get("name", name), doc.get("description", ""), lat, surface, group, base,
                   dict(doc.get("expected", {})))


def load_fixture(ref: str) -> Fixture:
    """A packaged fixture by name, or a JSON file path."""
    if ref in _BUILDERS:
        return get_fixture(ref)
    if os.path.exists(ref):
        with open(ref) as fh:
            return fixture_from_json(json.load(fh), os.path.splitext(os.path.basename(ref))[0])
    raise FixtureError(f"{ref!r} is neither a packaged fixture nor a readable file")
