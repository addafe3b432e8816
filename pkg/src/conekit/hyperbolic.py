"""The hyperboloid model: the positive cone modulo scalars.

Every predicate here is evaluated in squared, cross-multiplied form so it
stays inside Q. Square roots of norms never get materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .lattice import LorentzLattice

# horoball U_e = {x : <x,e> <= BASE_CONSTANT * c * sqrt(<x,x>)}
BASE_CONSTANT = Fraction(1, 2)


class HyperbolicError(ValueError):
    pass


def _require_interior(lattice: LorentzLattice, x: Sequence, what: str = "point") -> None:
    if not lattice.in_positive_cone(x):
        raise HyperbolicError(f"{what} {tuple(x)} is not in the open positive cone")


def _require_isotropic(lattice: LorentzLattice, e: Sequence) -> None:
    if lattice.norm(e) != 0:
        raise HyperbolicError(f"{tuple(e)} is not isotropic")
    if not lattice.in_closed_positive_cone(e):
        raise HyperbolicError(f"{tuple(e)} is not in the closed positive cone")


def proportional(u: Sequence, v: Sequence) -> bool:
    return la.rank([u, v]) < 2


def cosh_sq_distance(lattice: LorentzLattice, x: Sequence, y: Sequence) -> Fraction:
    """cosh^2 of the hyperbolic distance between the rays of x and y."""
    _require_interior(lattice, x)
    _require_interior(lattice, y)
    xy = lattice.pairing(x, y)
    return Fraction(xy * xy) / (lattice.norm(x) * lattice.norm(y))


def cosh_sq_double(c: Fraction) -> Fraction:
    """cosh^2(2d) from c = cosh^2(d)."""
    return (2 * c - 1) ** 2


def lemma_ineq_holds(lattice: LorentzLattice, x: Sequence, e1: Sequence, e2: Sequence) -> bool:
    """<e1,e2> <x,x> <= 2 <x,e1> <x,e2> for isotropic e1, e2 and interior x.

    Scaling x to norm 1 turns this into <e1,e2> <= 2 <x,e1><x,e2>; the
    product form needs no square root.
    """
    _require_interior(lattice, x)
    _require_isotropic(lattice, e1)
    _require_isotropic(lattice, e2)
    lhs = lattice.pairing(e1, e2) * lattice.norm(x)
    rhs = 2 * lattice.pairing(x, e1) * lattice.pairing(x, e2)
    return lhs <= rhs


@dataclass(frozen=True)
class Horoball:
    """Closed horoball {x : <x,e> <= (scale/2) sqrt(<x,x>)} at a rational cusp e."""

    lattice: LorentzLattice
    center: tuple
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        e = la.vec(self.center)
        if not la.is_integral(e):
            raise HyperbolicError("horoball centre must be integral")
        _require_isotropic(self.lattice, e)
        if self.lattice.primitive(e) != e:
            raise HyperbolicError(f"horoball centre {e} is not primitive")
        s = la.to_fraction(self.scale)
        if s <= 0:
            raise HyperbolicError("horoball scale must be positive")
        object.__setattr__(self, "center", e)
        object.__setattr__(self, "scale", s)

    def contains(self, x: Sequence) -> bool:
        return horoball_contains(self, x)


def horoball_contains(ball: Horoball, x: Sequence) -> bool:
    lat = ball.lattice
    _require_interior(lat, x)
    xe = lat.pairing(x, ball.center)
    # <x,e> > 0 for interior x, so squaring preserves the comparison
    return xe * xe <= (BASE_CONSTANT * ball.scale) ** 2 * lat.norm(x)


def horoballs_disjoint(b1: Horoball, b2: Horoball) -> bool:
    """Disjointness certificate for horoballs at distinct cusps.

    A common point x of norm 1 would give <e1,e2> <= 2 (c1/2)(c2/2) by the
    isotropic inequality, so <e1,e2> > c1 c2 / 2 proves disjointness. For
    unit horoballs at distinct primitive integral cusps <e1,e2> >= 1 always.
    """
    if b1.lattice != b2.lattice:
        raise HyperbolicError("horoballs live in different lattices")
    if b1.center == b2.center:
        raise HyperbolicError("horoballs share a centre")
    e12 = b1.lattice.pairing(b1.center, b2.center)
    return e12 > 2 * (BASE_CONSTANT * b1.scale) * (BASE_CONSTANT * b2.scale)


@dataclass(frozen=True)
class Bisector:
    """Equidistant hypersurface between interior points y and z.

    ``functional`` is a lattice vector f with <x, f> >= 0 exactly on y's
    side; it is present whenever z^2 / y^2 is a rational square (always for
    orbit points). Otherwise only the quadratic ``side`` test is exact.
    """

    lattice: LorentzLattice
    y: tuple
    z: tuple
    functional: tuple | None

    def side(self, x: Sequence) -> int:
        """+1 if x is strictly closer to y, -1 if strictly closer to z, 0 on the bisector."""
        lat = self.lattice
        if self.functional is not None:
            v = lat.pairing(x, self.functional)
            return (v > 0) - (v < 0)
        # closer to y  <=>  <x,y>/sqrt(y^2) < <x,z>/sqrt(z^2), both sides positive
        a = Fraction(lat.pairing(x, self.y)) ** 2 * lat.norm(self.z)
        b = Fraction(lat.pairing(x, self.z)) ** 2 * lat.norm(self.y)
        return (a < b) - (a > b)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    import math

    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def bisector_halfspace(lattice: LorentzLattice, y: Sequence, z: Sequence) -> Bisector:
    _require_interior(lattice, y, "y")
    _require_interior(lattice, z, "z")
    if proportional(y, z):
        raise HyperbolicError("bisector of a point with itself is undefined")
    ratio = _rational_sqrt(Fraction(lattice.norm(z)) / lattice.norm(y))
    functional = None
    if ratio is not None:
        # rescale y to the norm of z, then {<x,y'> <= <x,z>} = {<x, z - y'> >= 0}
        functional = la.vec(a - ratio * b for a, b in zip(z, y))
    return Bisector(lattice, la.vec(y), la.vec(z), functional)


def horosphere_level(lattice: LorentzLattice, x: Sequence, e: Sequence) -> Fraction:
    """<x,e>^2 / <x,x>: smaller means deeper inside the horoballs at e."""
    _require_interior(lattice, x)
    xe = lattice.pairing(x, e)
    return Fraction(xe * xe) / lattice.norm(x)
