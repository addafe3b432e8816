"""Intersection theory on the Picard lattice of a surface.

Everything is relative to the curve list a fixture declares: "nef" means
nonnegative on the listed curves, and any claim that needs more (rationality,
effectivity of -nK, fibration data) is read from ``declares``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .cone import PolyCone, face, from_rays
from .enumeration import slice_classes
from .isometry import Isometry, orthogonal_complement_basis, parabolic_map
from .lattice import LorentzLattice, congruence_signature


class SurfaceError(ValueError):
    pass


class NotNegativeDefinite(SurfaceError):
    pass


class NotNef(SurfaceError):
    pass


@dataclass(frozen=True)
class Curve:
    name: str
    cls: tuple
    in_fiber: bool = False


@dataclass(frozen=True)
class SurfaceData:
    """Picard lattice with canonical class K, boundary Delta and known curves."""

    lattice: LorentzLattice
    K: tuple
    curves: tuple = ()
    delta: tuple = ()  # (curve index, coefficient)
    declares: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = self.lattice.rank
        k = la.vec(self.K)
        if len(k) != n or not la.is_integral(k):
            raise SurfaceError("K must be an integral vector of the lattice rank")
        object.__setattr__(self, "K", k)
        curves = []
        for c in self.curves:
            if not isinstance(c, Curve):
                c = Curve(*c)
            cls = la.vec(c.cls)
            if len(cls) != n or not la.is_integral(cls):
                raise SurfaceError(f"curve {c.name} must be an integral vector of the lattice rank")
            curves.append(Curve(c.name, cls, bool(c.in_fiber)))
        object.__setattr__(self, "curves", tuple(curves))
        delta = []
        for i, a in self.delta:
            a = la.to_fraction(a)
            if not 0 <= i < len(curves):
                raise SurfaceError(f"boundary refers to unknown curve {i}")
            if not 0 <= a < 1:
                raise SurfaceError(f"boundary coefficient {a} is outside [0, 1)")
            delta.append((i, a))
        object.__setattr__(self, "delta", tuple(delta))
        if self.declares.get("klt_calabi_yau") and any(self.k_plus_delta()):
            raise SurfaceError("declared Calabi-Yau pair but K + Delta is not numerically trivial")

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def pairing(self, u, v):
        return self.lattice.pairing(u, v)

    def k_plus_delta(self) -> tuple:
        out = list(self.K)
        for i, a in self.delta:
            out = [x + a * c for x, c in zip(out, self.curves[i].cls)]
        return la.vec(out)

    def curve_gram(self, indices: Sequence[int]) -> list[list]:
        cs = [self.curves[i].cls for i in indices]
        return [[self.pairing(a, b) for b in cs] for a in cs]

    def curve_index(self, name: str) -> int:
        for i, c in enumerate(self.curves):
            if c.name == name:
                return i
        raise KeyError(name)

    def is_nef(self, v: Sequence) -> bool:
        return all(self.pairing(v, c.cls) >= 0 for c in self.curves)

    def fibration(self) -> dict | None:
        return self.declares.get("fibration")

    @classmethod
    def from_json(cls, doc: dict) -> "SurfaceData":
        lat = LorentzLattice.from_json(doc["lattice"])
        curves = [Curve(c["name"], la.vec(c["class"]), bool(c.get("in_fiber", False))) for c in doc.get("curves", [])]
        delta = [(int(d["curve"]), la.to_fraction(d["coeff"])) for d in doc.get("delta", [])]
        declares = dict(doc.get("declares", {}))
        if "fibration" in declares and declares["fibration"] is not None:
            fib = dict(declares["fibration"])
            fib["P"] = la.vec(fib["P"])
            declares["fibration"] = fib
        return cls(lat, la.vec(doc["K"]), tuple(curves), tuple(delta), declares)

    def to_json(self) -> dict:
        from .jsonio import rat

        declares = dict(self.declares)
        if declares.get("fibration"):
            fib = dict(declares["fibration"])
            fib["P"] = [rat(x) for x in fib["P"]]
            declares["fibration"] = fib
        return {
            "lattice": self.lattice.to_json(),
            "K": list(self.K),
            "delta": [{"curve": i, "coeff": rat(a)} for i, a in self.delta],
            "curves": [{"name": c.name, "class": list(c.cls), "in_fiber": c.in_fiber} for c in self.curves],
            "declares": declares,
        }


# ---------------------------------------------------------------------------
# Riemann-Roch


def riemann_roch_chi(S: SurfaceData, L: Sequence) -> Fraction:
    """chi(L) = (L^2 - L.K)/2 + 1 on a rational surface."""
    if not S.declares.get("rational_surface"):
        raise SurfaceError("Riemann-Roch with chi(O) = 1 needs a surface declared rational")
    return Fraction(S.pairing(L, L) - S.pairing(L, S.K), 2) + 1


def nef_is_effective(S: SurfaceData, L: Sequence) -> tuple[bool, Fraction]:
    """For nef L on a rational surface with -nK effective, chi(L) >= 1 forces h^0(L) > 0."""
    if not S.is_nef(L):
        raise NotNef("L is negative on a listed curve")
    if not S.declares.get("anti_K_effective"):
        raise SurfaceError("effectivity of nef classes needs -nK declared effective")
    chi = riemann_roch_chi(S, L)
    return chi >= 1, chi


# ---------------------------------------------------------------------------
# negativity lemma


def is_negative_definite(gram: Sequence[Sequence]) -> bool:
    if not gram:
        return True
    p, q = congruence_signature(gram)
    return p == 0 and q == len(gram)


def dual_graph_components(gram: Sequence[Sequence]) -> list[list[int]]:
    n = len(gram)
    seen, comps = set(), []
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and gram[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class NegativitySolution:
    coeffs: tuple
    components: tuple  # connected components of the dual graph, as local indices
    support: tuple  # local indices with nonzero coefficient
    support_is_union: bool


def solve_negative_definite(gram: Sequence[Sequence], targets: Sequence) -> NegativitySolution:
    """Solve sum_i a_i (C_i . C_j) = t_j for a negative definite intersection matrix."""
    g = la.mat(gram)
    t = la.vec(targets)
    if len(t) != len(g):
        raise SurfaceError("one target per support curve is required")
    if not is_negative_definite(g):
        raise NotNegativeDefinite("support intersection matrix is not negative definite")
    if not g:
        return NegativitySolution((), (), (), True)
    a = la.solve(g, t)
    comps = dual_graph_components(g)
    support = tuple(i for i, x in enumerate(a) if x != 0)
    sup = set(support)
    union = all(set(c) <= sup or not (set(c) & sup) for c in comps)
    if all(x <= 0 for x in t):
        # the lemma: nonpositive intersection numbers force an effective solution
        if any(x < 0 for x in a):
            raise RuntimeError("negativity lemma violated: internal error")
    return NegativitySolution(a, tuple(tuple(c) for c in comps), support, union)


def negativity_solve(S: SurfaceData, support: Sequence[int], targets: Sequence) -> NegativitySolution:
    return solve_negative_definite(S.curve_gram(support), targets)


# ---------------------------------------------------------------------------
# Zariski decomposition


@dataclass(frozen=True)
class ZariskiDecomp:
    P: tuple
    N_support: tuple  # curve indices, increasing
    N_coeffs: tuple

    def N(self, S: SurfaceData) -> tuple:
        out = [Fraction(0)] * S.rank
        for i, a in zip(self.N_support, self.N_coeffs):
            out = [x + a * c for x, c in zip(out, S.curves[i].cls)]
        return la.vec(out)

    def to_json(self, S: SurfaceData | None = None) -> dict:
        from .jsonio import rat

        doc = {
            "P": [rat(x) for x in self.P],
            "N": [{"curve": i, "coeff": rat(a)} for i, a in zip(self.N_support, self.N_coeffs)],
        }
        if S is not None:
            doc["N"] = [dict(d, name=S.curves[d["curve"]].name) for d in doc["N"]]
            doc["P_squared"] = rat(la.to_fraction(S.pairing(self.P, self.P)))
        return doc


def check_zariski(S: SurfaceData, D: Sequence, Z: ZariskiDecomp) -> None:
    """Raise unless Z is a Zariski decomposition of D relative to the curve list."""
    if la.vec(la.add(Z.P, Z.N(S))) != la.vec(D):
        raise SurfaceError("P + N != D")
    if not S.is_nef(Z.P):
        raise SurfaceError("P is not nef on the curve list")
    if any(S.pairing(Z.P, S.curves[i].cls) != 0 for i in Z.N_support):
        raise SurfaceError("P . N_i != 0")
    if not is_negative_definite(S.curve_gram(Z.N_support)):
        raise SurfaceError("N support is not negative definite")
    if any(a <= 0 for a in Z.N_coeffs):
        raise SurfaceError("N coefficients must be positive")


def zariski_decompose(S: SurfaceData, D: Sequence) -> ZariskiDecomp:
    """Zariski decomposition by enlarging the negative part until P is nef on every listed curve."""
    D = la.vec(D)
    if len(D) != S.rank:
        raise SurfaceError("divisor has the wrong length")
    support: list[int] = []
    coeffs: tuple = ()
    while True:
        N = [Fraction(0)] * S.rank
        for i, a in zip(support, coeffs):
            N = [x + a * c for x, c in zip(N, S.curves[i].cls)]
        P = la.vec(la.sub(D, N))
        bad = [i for i, c in enumerate(S.curves) if i not in support and S.pairing(P, c.cls) < 0]
        if not bad:
            break
        support = sorted(set(support) | set(bad))
        g = S.curve_gram(support)
        if not is_negative_definite(g):
            raise NotNegativeDefinite("negative part would need a non negative definite support: "
                                      + ", ".join(S.curves[i].name for i in support))
        coeffs = la.solve(g, [S.pairing(D, S.curves[i].cls) for i in support])
    kept = [(i, a) for i, a in zip(support, coeffs) if a != 0]
    Z = ZariskiDecomp(P, tuple(i for i, _ in kept), tuple(la.simplify(a) for _, a in kept))
    check_zariski(S, D, Z)
    return Z


def iitaka_case(S: SurfaceData, Z: ZariskiDecomp) -> str:
    """"two" if P^2 > 0, "one" if P is nonzero with P^2 = 0, "zero" if P = 0."""
    pp = S.pairing(Z.P, Z.P)
    if pp > 0:
        return "two"
    if any(x != 0 for x in Z.P):
        return "one"
    return "zero"


# ---------------------------------------------------------------------------
# (-1)-classes and their types


@dataclass(frozen=True)
class MinusOneClasses:
    classes: tuple
    complete: bool  # the list is every (-1)-class of the lattice
    degree_bound: int
    per_degree: tuple  # counts for degree 1..degree_bound

    def to_json(self) -> dict:
        return {"count": len(self.classes), "complete": self.complete, "degree_bound": self.degree_bound,
                "per_degree": list(self.per_degree), "classes": [list(c) for c in self.classes]}


def minus_one_classes(S: SurfaceData, degree_bound: int) -> MinusOneClasses:
    """Integral E with E^2 = -1, K.E = -1 and 0 < A.E <= degree_bound."""
    lat = S.lattice
    A = lat.ample
    kk = lat.norm(S.K)
    minus_k = tuple(-x for x in S.K)
    if kk > 0 and lat.in_positive_cone(minus_k):
        # -K is a slice centre: every (-1)-class has <-K, E> = 1, a single finite slice
        every = slice_classes(lat, minus_k, 1, -1)
        every = [e for e in every if lat.pairing(A, e) > 0]
        per = [0] * degree_bound
        chosen = []
        for e in every:
            d = lat.pairing(A, e)
            if d <= degree_bound:
                per[math.ceil(d) - 1] += 1
                chosen.append(e)
        complete = len(chosen) == len(every)
        return MinusOneClasses(tuple(sorted(chosen)), complete, degree_bound, tuple(per))
    per, chosen = [], []
    for d in range(1, degree_bound + 1):
        found = slice_classes(lat, A, d, -1, extra=[(S.K, -1)])
        per.append(len(found))
        chosen.extend(found)
    # with K^2 <= 0 the (-1)-classes need not be finite; report the degree range only
    return MinusOneClasses(tuple(sorted(chosen)), False, degree_bound, tuple(per))


@dataclass(frozen=True, order=True)
class CurveType:
    lambdas: tuple


def curve_types(S: SurfaceData, Z: ZariskiDecomp) -> list[CurveType]:
    """All lambda in N^r with sum a_i lambda_i = 1, lexicographically."""
    a = [la.to_fraction(x) for x in Z.N_coeffs]
    if not a:
        raise SurfaceError("curve types need a nonzero negative part")
    out: list[tuple] = []

    def rec(i: int, rest: Fraction, acc: list[int]):
        if i == len(a):
            if rest == 0:
                out.append(tuple(acc))
            return
        k = 0
        while k * a[i] <= rest:
            rec(i + 1, rest - k * a[i], acc + [k])
            k += 1

    rec(0, Fraction(1), [])
    return [CurveType(t) for t in sorted(out)]


def type_of(S: SurfaceData, Z: ZariskiDecomp, E: Sequence) -> CurveType:
    return CurveType(tuple(la.simplify(S.pairing(E, S.curves[i].cls)) for i in Z.N_support))


def declared_minus_one_report(S: SurfaceData, Z: ZariskiDecomp) -> list[dict]:
    """P.E and the type of every declared curve with E^2 = -1, K.E = -1 outside the support of N.

    The bound P.E <= 1 is only meaningful for irreducible curves, so it is
    reported for declared curves and never asserted for raw lattice classes.
    """
    from .jsonio import rat

    out = []
    for i, c in enumerate(S.curves):
        if i in Z.N_support or S.pairing(c.cls, c.cls) != -1 or S.pairing(S.K, c.cls) != -1:
            continue
        pe = la.to_fraction(S.pairing(Z.P, c.cls))
        out.append({"name": c.name, "P_dot_E": rat(pe), "bound_holds": pe <= 1,
                    "type": [rat(la.to_fraction(x)) for x in type_of(S, Z, c.cls).lambdas]})
    return out


# ---------------------------------------------------------------------------
# Mordell-Weil


def _fibration_data(S: SurfaceData, P=None, b=None, a=None):
    fib = S.fibration() or {}
    P = la.vec(P if P is not None else fib.get("P", ()))
    if not P:
        raise SurfaceError("no fibration class given or declared")
    b = la.to_fraction(b if b is not None else fib.get("b", 1))
    a = la.to_fraction(a if a is not None else fib.get("a", 1))
    if S.pairing(P, P) != 0:
        raise SurfaceError("fibration class P must be isotropic")
    return P, a, b


def fiber_components(S: SurfaceData) -> list[tuple]:
    return [c.cls for c in S.curves if c.in_fiber]


def mordell_weil_action(S: SurfaceData, x: Sequence, P=None, b=None) -> Isometry:
    """phi_x(y) = y + (y.bP) x - (x.y + (x.x)(y.bP)/2) bP."""
    P, _, b = _fibration_data(S, P, b)
    e = la.vec(b * p for p in P)
    if S.pairing(x, e) != 0:
        raise SurfaceError("x must be orthogonal to the fiber class")
    for c in fiber_components(S):
        if S.pairing(x, c) != 0:
            raise SurfaceError("x must be orthogonal to every fiber component")
    return parabolic_map(S.lattice, e, x)


@dataclass(frozen=True)
class MordellWeilData:
    rank: int
    torsion: tuple  # invariant factors > 1
    quotient_reps: tuple  # free generators of P^perp / (aP, C_i)
    action_basis: tuple  # basis of (P^perp cap C_i^perp) / Z P, valid inputs for the action

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion),
                "quotient_reps": [list(v) for v in self.quotient_reps],
                "action_basis": [list(v) for v in self.action_basis]}


def mordell_weil_group_data(S: SurfaceData, P=None, components: Sequence[Sequence] | None = None, a=None) -> MordellWeilData:
    """Rank and torsion of P^perp / (aP, C_1, ..., C_r) by Smith normal form."""
    P, a, _ = _fibration_data(S, P, None, a)
    comps = [la.vec(c) for c in (components if components is not None else fiber_components(S))]
    lat = S.lattice
    perp = la.integer_kernel([lat.covector(P)], lat.rank)
    m = len(perp)
    basis_t = la.transpose(perp)
    rel_rows = []
    for r in [la.vec(a * p for p in P)] + comps:
        if lat.pairing(r, P) != 0:
            raise SurfaceError("a relation is not orthogonal to P")
        coords = la.solve_any(basis_t, r)
        if coords is None or not la.is_integral(coords):
            raise SurfaceError("a relation is not an integral class of P^perp")
        rel_rows.append([int(c) for c in coords])
    invariants, _, V = la.smith_normal_form(rel_rows)
    nonzero = [d for d in invariants if d != 0]
    rank = m - len(nonzero)
    torsion = tuple(abs(d) for d in nonzero if abs(d) > 1)
    # columns of V past the nonzero invariants give free generators: R V = U^-1 D
    w = la.inverse(V)
    reps = []
    for j in range(len(nonzero), m):
        row = w[j]
        reps.append(la.vec(sum(row[k] * perp[k][i] for k in range(m)) for i in range(lat.rank)))
    P_prim = lat.primitive(la.primitive_integral(P))
    action = orthogonal_complement_basis(lat, P_prim, comps)
    return MordellWeilData(rank, torsion, tuple(reps), tuple(action))


# ---------------------------------------------------------------------------
# chamber cones and the polyhedrality classifier


def pi_E_cone(S: SurfaceData, Z: ZariskiDecomp, E: Sequence, nef_cone: PolyCone) -> PolyCone:
    """The cone spanned by P and the face of the nef cone orthogonal to E."""
    if S.pairing(Z.P, Z.P) != 0:
        raise SurfaceError("chamber cones are defined when P^2 = 0")
    if S.pairing(Z.P, E) <= 0:
        raise SurfaceError("E must meet the fibers (E.P > 0)")
    F = face(nef_cone, [E])
    gens = list(F.rays) + [la.primitive_integral(Z.P)]
    return from_rays(nef_cone.gram, gens, F.lineality)


def nef_cone_from_curves(S: SurfaceData, classes: Sequence[Sequence]) -> PolyCone:
    from .cone import from_facets

    return from_facets(S.lattice, classes)


@dataclass(frozen=True)
class Verdict:
    verdict: str  # PolyhedralCertified | NotPolyhedralWithinBound | Inconclusive
    condition: str
    klt_calabi_yau: bool
    facet_classes: tuple = ()
    counts: tuple = ()
    mordell_weil_rank: int | None = None

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "condition": self.condition, "klt_calabi_yau": self.klt_calabi_yau,
                "facet_classes": len(self.facet_classes), "counts": list(self.counts),
                "mordell_weil_rank": self.mordell_weil_rank}


def classify_cone(S: SurfaceData, degree_bounds: Sequence[int] = (3, 4, 5)) -> Verdict:
    """Semi-decision for rational polyhedrality of the nef cone."""
    klt = bool(S.declares.get("klt_calabi_yau")) and not any(S.k_plus_delta())
    lat = S.lattice
    negative = sorted({c.cls for c in S.curves if S.pairing(c.cls, c.cls) < 0})
    if lat.rank <= 2:
        return Verdict("PolyhedralCertified", "Picard number at most 2", klt, tuple(negative))
    minus_k = tuple(-x for x in S.K)
    if lat.norm(S.K) > 0 and lat.in_positive_cone(minus_k):
        every = slice_classes(lat, minus_k, 1, -1)
        classes = sorted(set(every) | set(negative))
        return Verdict("PolyhedralCertified",
                       "(2) nef cone is dual to finitely many negative classes (-K big, (-1)-classes complete)",
                       klt, tuple(classes), (len(every),))
    mw_rank = None
    if S.fibration():
        mw_rank = mordell_weil_group_data(S).rank
    counts = tuple(len(minus_one_classes(S, d).classes) for d in degree_bounds)
    if len(counts) >= 3 and all(x < y for x, y in zip(counts, counts[1:])):
        cond = "(-1)-class count strictly increasing over degree bounds " + ", ".join(map(str, degree_bounds))
        if mw_rank:
            cond += f"; (3) fails: Mordell-Weil rank {mw_rank} > 0"
        return Verdict("NotPolyhedralWithinBound", cond, klt, (), counts, mw_rank)
    return Verdict("Inconclusive", "no finiteness certificate and no growth within the bounds", klt, tuple(negative),
                   counts, mw_rank)
