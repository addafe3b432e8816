"""Rational polyhedral cones in double representation, Dirichlet domains and tiling checks.

A cone lives in Q^n together with a nondegenerate symmetric pairing. Facets
are stored as vectors f of the same space, meaning the halfspace
<f, x> = f^T G x >= 0. Conversion between generators and halfspaces is an
incremental double description with a combinatorial adjacency test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .enumeration import slice_classes
from .isometry import GroupGens, Isometry, OrbitBall, orbit_ball
from .lattice import LorentzLattice


class ConeError(ValueError):
    pass


class NotSupporting(ConeError):
    """A face was requested for a functional that changes sign on the cone."""


class StabilizerNontrivial(ConeError):
    def __init__(self, witness: Isometry):
        super().__init__("basepoint has a nontrivial stabilizer in the group")
        self.witness = witness


def _prim(v: Sequence) -> tuple:
    return la.primitive_integral(v)


def _canonical_basis(vectors: Sequence[Sequence], n: int) -> list[tuple]:
    """Primitive integral rows of the reduced echelon form of span(vectors)."""
    if not vectors:
        return []
    rows, pivots = la.rref(vectors)
    return [_prim(rows[i]) for i in range(len(pivots))]


def _double_description(rows: list[tuple], d: int) -> list[tuple]:
    """Extreme rays of the pointed cone {t in Q^d : a . t >= 0 for a in rows}; rows span Q^d."""
    if d == 0:
        return []
    basis_idx: list[int] = []
    for i, r in enumerate(rows):
        if la.rank([rows[j] for j in basis_idx] + [r]) > len(basis_idx):
            basis_idx.append(i)
            if len(basis_idx) == d:
                break
    b = [rows[i] for i in basis_idx]
    inv = la.inverse(b)
    rays: list[tuple[tuple, frozenset]] = []
    for j in range(d):
        col = _prim([inv[i][j] for i in range(d)])
        rays.append((col, frozenset(basis_idx[k] for k in range(d) if k != j)))
    done = set(basis_idx)
    for i, a in enumerate(rows):
        if i in done:
            continue
        done.add(i)
        vals = [la.dot(a, r) for r, _ in rays]
        neg = [k for k, v in enumerate(vals) if v < 0]
        if not neg:
            rays = [(r, z | {i}) if vals[k] == 0 else (r, z) for k, (r, z) in enumerate(rays)]
            continue
        pos = [k for k, v in enumerate(vals) if v > 0]
        new = []
        for p in pos:
            rp, zp = rays[p]
            for q in neg:
                rq, zq = rays[q]
                common = zp & zq
                if len(common) < d - 2:
                    continue
                if any(k != p and k != q and common <= rays[k][1] for k in range(len(rays))):
                    continue
                r = _prim([vals[p] * x - vals[q] * y for x, y in zip(rq, rp)])
                new.append((r, common | {i}))
        kept = [(r, z | {i}) if vals[k] == 0 else (r, z) for k, (r, z) in enumerate(rays) if vals[k] >= 0]
        rays = kept + new
    return sorted({r for r, _ in rays})


def _h_to_v(covectors: Sequence[Sequence], n: int) -> tuple[list[tuple], list[tuple]]:
    """(extreme rays, lineality basis) of {x : phi . x >= 0}."""
    if not covectors:
        return [], [tuple(int(i == j) for j in range(n)) for i in range(n)]
    lin = _canonical_basis(la.nullspace(covectors, n), n)
    w = _canonical_basis(la.nullspace(lin, n), n) if lin else [tuple(int(i == j) for j in range(n)) for i in range(n)]
    d = len(w)
    # coordinates in the complement W of the lineality space
    rows = [_prim_or_zero([la.dot(phi, wj) for wj in w]) for phi in covectors]
    rows = [r for r in rows if any(r)]
    ts = _double_description(rows, d)
    rays = sorted({_prim([sum(t[j] * w[j][i] for j in range(d)) for i in range(n)]) for t in ts})
    return rays, lin


def _prim_or_zero(v: Sequence) -> tuple:
    if all(x == 0 for x in v):
        return tuple(0 for _ in v)
    return _prim(v)


@dataclass(frozen=True)
class PolyCone:
    """A closed convex rational cone held as rays + lineality and as facets.

    Both lists are canonical: rays are the primitive integral extreme rays,
    facets are the primitive integral extreme rays of the dual cone (pulled
    back through the pairing), each list sorted. A cone containing a line has
    ``pointed == False`` and its facet list contains +-f for every equation.
    """

    gram: tuple
    rays: tuple
    facets: tuple
    lineality: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.gram)

    @property
    def pointed(self) -> bool:
        return not self.lineality

    def pair(self, f: Sequence, x: Sequence):
        return la.dot(f, la.mat_vec(self.gram, x))

    def contains(self, x: Sequence) -> bool:
        return all(self.pair(f, x) >= 0 for f in self.facets)

    def in_interior(self, x: Sequence) -> bool:
        return all(self.pair(f, x) > 0 for f in self.facets)

    def to_json(self) -> dict:
        return {
            "rays": [list(r) for r in self.rays],
            "facets": [list(f) for f in self.facets],
            "lineality": [list(v) for v in self.lineality],
        }

    @classmethod
    def from_json(cls, pairing, doc: dict) -> "PolyCone":
        if doc.get("rays") or doc.get("lineality"):
            return from_rays(pairing, [la.vec(r) for r in doc.get("rays", [])], [la.vec(v) for v in doc.get("lineality", [])])
        return from_facets(pairing, [la.vec(f) for f in doc.get("facets", [])])


def _gram_of(pairing) -> tuple:
    if isinstance(pairing, LorentzLattice):
        return pairing.gram
    g = la.mat(pairing)
    if len(g) == 0 or any(len(r) != len(g) for r in g):
        raise ConeError("pairing must be a square matrix")
    if la.det(g) == 0:
        raise ConeError("pairing must be nondegenerate")
    return g


def _facets_of(gram: tuple, rays: Sequence, lineality: Sequence) -> list[tuple]:
    n = len(gram)
    rows = [tuple(r) for r in rays] + [tuple(v) for v in lineality] + [tuple(-x for x in v) for v in lineality]
    dual_rays, dual_lin = _h_to_v(rows, n)
    ginv = la.inverse(gram)
    out = {_prim(la.mat_vec(ginv, phi)) for phi in dual_rays}
    for phi in dual_lin:
        f = _prim(la.mat_vec(ginv, phi))
        out.add(f)
        out.add(tuple(-x for x in f))
    return sorted(out)


def from_facets(pairing, facets: Sequence[Sequence]) -> PolyCone:
    """The cone {x : <f, x> >= 0 for all f}, in canonical double form."""
    gram = _gram_of(pairing)
    n = len(gram)
    covs = []
    for f in facets:
        if len(f) != n:
            raise ConeError(f"facet {tuple(f)} has the wrong length")
        if any(x != 0 for x in f):
            covs.append(_prim(la.mat_vec(gram, f)))
    rays, lin = _h_to_v(covs, n)
    return PolyCone(gram, tuple(rays), tuple(_facets_of(gram, rays, lin)), tuple(lin))


def from_rays(pairing, rays: Sequence[Sequence], lineality: Sequence[Sequence] = ()) -> PolyCone:
    """The cone generated by rays (and the linear span of lineality)."""
    gram = _gram_of(pairing)
    n = len(gram)
    for r in list(rays) + list(lineality):
        if len(r) != n:
            raise ConeError(f"vector {tuple(r)} has the wrong length")
    rs = [_prim(r) for r in rays if any(x != 0 for x in r)]
    ls = [la.vec(v) for v in lineality if any(x != 0 for x in v)]
    facets = _facets_of(gram, rs, ls)
    return from_facets(gram, facets)


def dual_convert(pairing, *, rays: Sequence[Sequence] | None = None, facets: Sequence[Sequence] | None = None,
                 lineality: Sequence[Sequence] = ()) -> PolyCone:
    """Build the mutually dual pair from exactly one of ``rays`` or ``facets``."""
    if (rays is None) == (facets is None):
        raise ConeError("give exactly one of rays or facets")
    if rays is not None:
        if not rays and not lineality:
            raise ConeError("empty ray list")
        return from_rays(pairing, rays, lineality)
    if not facets:
        raise ConeError("empty facet list")
    return from_facets(pairing, facets)


def face(cone: PolyCone, orthogonal_to: Sequence[Sequence]) -> PolyCone:
    """The face {x in cone : <x, v> = 0 for v in orthogonal_to}."""
    rays = list(cone.rays)
    for v in orthogonal_to:
        if any(cone.pair(v, l) != 0 for l in cone.lineality):
            raise NotSupporting(f"{tuple(v)} is not constant on the lineality space")
        vals = [cone.pair(v, r) for r in rays]
        if any(x < 0 for x in vals):
            raise NotSupporting(f"{tuple(v)} takes negative values on the cone")
        rays = [r for r, x in zip(rays, vals) if x == 0]
    if not orthogonal_to:
        return cone
    if not rays and not cone.lineality:
        return zero_cone(cone.gram)
    return from_rays(cone.gram, rays, cone.lineality)


def zero_cone(pairing) -> PolyCone:
    gram = _gram_of(pairing)
    return PolyCone(gram, (), tuple(_facets_of(gram, [], [])), ())


# ---------------------------------------------------------------------------
# Dirichlet domains


@dataclass(frozen=True)
class DirichletResult:
    """A Dirichlet domain {x : <x, gy - y> >= 0 for orbit points gy} with its provenance.

    ``certified`` means the orbit ball is complete at ``bound``, the cone is
    pointed and lies in the closed positive cone, ``bound`` dominates the
    doubled circumradius of the interior rays and every isotropic ray passes
    the nearest-cusp test. ``lattice_certified`` is an independent check that
    does not rely on the orbit search: no lattice vector in the orbit of a
    ray is closer to the basepoint than the ray itself.
    """

    domain: PolyCone
    basepoint: tuple
    orbit_used: int
    certified: bool
    boundary_rational_rays: tuple
    facet_words: dict = field(compare=False)
    bound: Fraction = Fraction(0)
    required_bound: Fraction | None = None
    budget_exceeded: bool = False
    lattice_certified: bool | None = None
    reason: str = ""
    ball: OrbitBall | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        from .jsonio import rat

        return {
            "basepoint": [rat(x) for x in self.basepoint],
            "domain": self.domain.to_json(),
            "orbit_used": self.orbit_used,
            "certified": self.certified,
            "lattice_certified": self.lattice_certified,
            "boundary_rational_rays": [list(r) for r in self.boundary_rational_rays],
            "facet_words": [{"facet": list(f), "words": list(w)} for f, w in sorted(self.facet_words.items())],
            "bound": rat(self.bound),
            "required_bound": None if self.required_bound is None else rat(self.required_bound),
            "budget_exceeded": self.budget_exceeded,
            "reason": self.reason,
        }


def _group_is_integral(group: GroupGens) -> bool:
    return all(g.is_integral and g.inverse().is_integral for g in group.gens)


def nearest_in_class(lattice: LorentzLattice, y0: Sequence, r: Sequence, level_cap: int = 400) -> bool | None:
    """True if no integral z with z^2 = r^2 satisfies 0 < <y0, z> < <y0, r>.

    For a group of integral isometries this proves <r, g y0> >= <r, y0> for
    every g, because g^{-1} r is such a z. None if the search is too large.
    """
    top = lattice.pairing(y0, r)
    if top > level_cap:
        return None
    norm = lattice.norm(r)
    return not any(slice_classes(lattice, y0, lvl, norm) for lvl in range(1, int(math.ceil(top))))


def _bisector_functional(y: tuple, gy: tuple) -> tuple:
    return _prim(la.sub(gy, y))


def _dirichlet_once(lattice: LorentzLattice, ball: OrbitBall, ambient: PolyCone | None):
    y = ball.basepoint
    words: dict[tuple, list[str]] = {}
    for p in ball.points:
        if p.word == "e":
            continue
        words.setdefault(_bisector_functional(y, p.point), []).append(p.word)
    facets = list(words)
    if ambient is not None:
        facets += list(ambient.facets)
    if not facets:
        return (ambient if ambient is not None else from_facets(lattice, [])), {}
    cone = from_facets(lattice, facets)
    kept = {f: sorted(words.get(f, ["ambient"]), key=lambda w: (len(w), w)) for f in cone.facets}
    return cone, kept


def dirichlet_domain(
    lattice: LorentzLattice,
    group: GroupGens,
    y: Sequence,
    ambient: PolyCone | None = None,
    bound=None,
    max_elements: int = 5000,
    max_rounds: int = 12,
    lattice_check: bool = True,
) -> DirichletResult:
    """Dirichlet domain of the orbit of y, enlarging the orbit ball until it is certified.

    Without ``ambient`` the domain is cut out of the closed positive cone, and
    the result is polyhedral only once the bisectors alone confine it there.
    """
    if not lattice.in_positive_cone(y):
        raise ConeError("basepoint must lie in the open positive cone")
    if ambient is not None and not ambient.in_interior(y):
        raise ConeError("basepoint must lie in the interior of the ambient cone")
    y0 = _prim(y)
    gens = group.with_inverses()
    if bound is None:
        bound = max([Fraction(2)] + [Fraction(lattice.pairing(y0, s(y0)) ** 2, lattice.norm(y0) ** 2) for _, s in gens])
    bound = la.to_fraction(bound)
    yy = lattice.norm(y0)
    last_size = -1
    stagnant = 0
    result = None
    for _ in range(max_rounds):
        ball = orbit_ball(group, y0, bound, max_elements)
        if ball.stabilizer_witness is not None:
            raise StabilizerNontrivial(ball.stabilizer_witness)
        cone, words = _dirichlet_once(lattice, ball, ambient)
        iso = tuple(r for r in cone.rays if lattice.norm(r) == 0)
        common = dict(domain=cone, basepoint=y0, orbit_used=len(ball), boundary_rational_rays=iso,
                      facet_words=words, bound=bound, ball=ball)
        if not ball.complete:
            return DirichletResult(certified=False, budget_exceeded=True,
                                   reason="orbit ball truncated by max_elements", **common)
        if not cone.pointed or not cone.rays or any(not lattice.in_closed_positive_cone(r) for r in cone.rays):
            stagnant = stagnant + 1 if len(ball) == last_size else 0
            last_size = len(ball)
            result = DirichletResult(certified=False, reason="bisectors do not yet confine the domain to the positive cone",
                                     **common)
            if stagnant >= 2:
                return result
            bound *= 4
            continue
        interior = [r for r in cone.rays if lattice.norm(r) > 0]
        cmax = max((Fraction(lattice.pairing(y0, r) ** 2, yy * lattice.norm(r)) for r in interior), default=Fraction(1))
        required = (2 * cmax - 1) ** 2
        if required > bound:
            bound = required
            continue
        integral = _group_is_integral(group)
        cusps_ok = integral and all(nearest_in_class(lattice, y0, e) for e in iso)
        lattice_ok = None
        if lattice_check and integral:
            checks = [nearest_in_class(lattice, y0, r) for r in cone.rays]
            lattice_ok = None if any(c is None for c in checks) else all(checks)
        reason = "" if cusps_ok else (
            "isotropic rays need integral generators" if not integral else "a closer cusp exists than an isotropic ray")
        return DirichletResult(certified=bool(cusps_ok), required_bound=required, lattice_certified=lattice_ok,
                               reason=reason, **common)
    if result is None:
        result = DirichletResult(certified=False, reason="round limit reached", **common)
    return result


# ---------------------------------------------------------------------------
# tiling verification


@dataclass(frozen=True)
class TileRecord:
    sample: tuple
    word: str | None
    multiplicity: int
    interior: bool
    located: bool

    def to_json(self) -> dict:
        from .jsonio import rat

        return {"sample": [rat(x) for x in self.sample], "word": self.word, "multiplicity": self.multiplicity,
                "interior": self.interior, "located": self.located}


@dataclass(frozen=True)
class TileReport:
    records: tuple
    failures: tuple
    overlaps: tuple  # samples strictly interior to two translates

    @property
    def coverage(self) -> Fraction:
        if not self.records:
            return Fraction(1)
        return Fraction(sum(r.located for r in self.records), len(self.records))

    @property
    def ok(self) -> bool:
        return not self.failures and not self.overlaps and all(
            r.multiplicity == 1 for r in self.records if r.interior)

    def to_json(self) -> dict:
        from .jsonio import rat

        return {
            "records": [r.to_json() for r in self.records],
            "failures": len(self.failures),
            "overlaps": len(self.overlaps),
            "coverage": rat(self.coverage),
            "ok": self.ok,
        }


def _facet_elements(result: DirichletResult) -> list[tuple[tuple, str, Isometry]]:
    by_word = {p.word: p.element for p in result.ball.points}
    out = []
    for f, ws in sorted(result.facet_words.items()):
        w = ws[0]
        if w in by_word:
            out.append((f, w, by_word[w]))
    return out


def locate(result: DirichletResult, x: Sequence, word_budget: int = 10_000):
    """(word, element h, h^{-1} x) with h^{-1} x in the domain, by walking across violated facets.

    Each step moves x strictly closer to the basepoint among a discrete set of
    values, so the walk terminates. Returns None if the budget runs out or a
    violated facet is not a bisector.
    """
    dom = result.domain
    steps = _facet_elements(result)
    elem = None
    words: list[str] = []
    cur = la.vec(x)
    for _ in range(word_budget):
        bad = next(((f, w, g) for f, w, g in steps if dom.pair(f, cur) < 0), None)
        if bad is None:
            if not dom.contains(cur):
                return None  # only an ambient facet is violated
            return (" ".join(words) if words else "e"), elem, cur
        _, w, g = bad
        cur = la.vec(la.simplify(a) for a in g.inverse()(cur))
        elem = g if elem is None else elem @ g
        words.append(w)
    return None


def tile_check(result: DirichletResult, group: GroupGens, samples: Sequence[Sequence], word_budget: int = 10_000) -> TileReport:
    """Locate every sample in a translate of the domain and count the translates containing it."""
    lat = group.lattice
    y = result.basepoint
    ball_pts = [p.point for p in result.ball.points] if result.ball is not None else [y]
    records, failures, overlaps = [], [], []
    for s in samples:
        s = la.vec(s)
        loc = locate(result, s, word_budget)
        if loc is None:
            rec = TileRecord(s, None, 0, False, False)
            records.append(rec)
            failures.append(rec)
            continue
        word, _, x = loc
        xy = lat.pairing(x, y)
        # every orbit point equidistant from x with y; all lie in the ball when it is certified
        vals = [lat.pairing(x, p) for p in ball_pts]
        closer = [v for v in vals if v < xy]
        mult = sum(1 for v in vals if v == xy)
        interior = result.domain.in_interior(x)
        rec = TileRecord(s, word, mult, interior, not closer)
        records.append(rec)
        if closer:
            failures.append(rec)
        if interior and mult > 1:
            overlaps.append(rec)
    return TileReport(tuple(records), tuple(failures), tuple(overlaps))
