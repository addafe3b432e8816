"""Elements and finitely generated subgroups of O+(S)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .lattice import LatticeError, LorentzLattice


class IsometryError(ValueError):
    pass


class FormNotPreserved(IsometryError):
    pass


class WrongConeComponent(IsometryError):
    pass


@dataclass(frozen=True)
class Isometry:
    """A rational matrix M (acting on column vectors) with M^T G M = G and M(ample) positive."""

    lattice: LorentzLattice
    matrix: tuple

    def __call__(self, v: Sequence) -> tuple:
        return la.mat_vec(self.matrix, v)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.lattice, la.normalize(la.mat_mul(self.matrix, other.matrix)))

    def inverse(self) -> "Isometry":
        # M^{-1} = G^{-1} M^T G for an isometry
        g = self.lattice.gram
        return Isometry(self.lattice, la.normalize(la.mat_mul(la.inverse(g), la.mat_mul(la.transpose(self.matrix), g))))

    @property
    def is_identity(self) -> bool:
        return self.matrix == la.identity(self.lattice.rank)

    @property
    def is_integral(self) -> bool:
        return all(la.is_integral(r) for r in self.matrix)


def verify_isometry(lattice: LorentzLattice, m: Sequence[Sequence]) -> Isometry:
    """Validate m as an element of O+(S) or raise naming the violated invariant."""
    mm = la.mat(m)
    n = lattice.rank
    if len(mm) != n or any(len(r) != n for r in mm):
        raise IsometryError(f"expected a {n}x{n} matrix")
    if la.normalize(la.mat_mul(la.transpose(mm), la.mat_mul(lattice.gram, mm))) != lattice.gram:
        raise FormNotPreserved("M^T G M != G")
    if lattice.pairing(lattice.ample, la.mat_vec(mm, lattice.ample)) <= 0:
        raise WrongConeComponent("M swaps the two components of the positive cone")
    return Isometry(lattice, mm)


def identity_isometry(lattice: LorentzLattice) -> Isometry:
    return Isometry(lattice, la.identity(lattice.rank))


@dataclass(frozen=True)
class GroupGens:
    """Generators of a subgroup of O+(S); inverses are adjoined by ``with_inverses``."""

    lattice: LorentzLattice
    gens: tuple = ()

    def __post_init__(self):
        checked = []
        for g in self.gens:
            if isinstance(g, Isometry):
                if g.lattice != self.lattice:
                    raise IsometryError("generators must share one lattice")
                checked.append(verify_isometry(self.lattice, g.matrix))
            else:
                checked.append(verify_isometry(self.lattice, g))
        object.__setattr__(self, "gens", tuple(checked))

    def with_inverses(self) -> list[tuple[str, Isometry]]:
        """Labelled generators g1, g1^-1, g2, ... with identities and repeats dropped."""
        out, seen = [], set()
        for i, g in enumerate(self.gens, start=1):
            for label, h in ((f"g{i}", g), (f"g{i}^-1", g.inverse())):
                if h.is_identity or h.matrix in seen:
                    continue
                seen.add(h.matrix)
                out.append((label, h))
        return out

    @classmethod
    def from_json(cls, lattice: LorentzLattice, doc: dict) -> "GroupGens":
        return cls(lattice, tuple(la.mat(m) for m in doc["generators"]))

    def to_json(self) -> dict:
        return {"generators": [[list(r) for r in g.matrix] for g in self.gens]}


# ---------------------------------------------------------------------------
# strictly parabolic transformations


def parabolic_matrix(lattice: LorentzLattice, e: Sequence, x: Sequence) -> tuple:
    """Matrix of y -> y + <y,e> x - (<x,y> + <x,x><y,e>/2) e."""
    n = lattice.rank
    ge = lattice.covector(e)
    gx = lattice.covector(x)
    half_xx = Fraction(lattice.norm(x), 2)
    return la.normalize(
        tuple(
            tuple(int(i == j) + x[i] * ge[j] - e[i] * gx[j] - half_xx * e[i] * ge[j] for j in range(n))
            for i in range(n)
        )
    )


def parabolic_map(lattice: LorentzLattice, e: Sequence, x: Sequence) -> Isometry:
    if lattice.norm(e) != 0 or all(c == 0 for c in e):
        raise IsometryError("e must be a nonzero isotropic vector")
    if lattice.pairing(x, e) != 0:
        raise IsometryError("x must be orthogonal to e")
    return verify_isometry(lattice, parabolic_matrix(lattice, e, x))


def _reduce_mod(x: tuple, e: tuple) -> tuple:
    """x + k e with the coordinate at e's first nonzero entry reduced to [0, |e_p|)."""
    p = next(i for i, c in enumerate(e) if c != 0)
    k = -(x[p] // e[p]) if e[p] > 0 else (x[p] // -e[p])
    return tuple(a + k * b for a, b in zip(x, e))


def orthogonal_complement_basis(lattice: LorentzLattice, e: Sequence, extra: Sequence[Sequence] = ()) -> list[tuple]:
    """Integral basis of a complement of Z e in e^perp (and extra^perp) intersect Z^n.

    The result is deterministic: the kernel comes from a fixed column
    reduction and each vector is reduced modulo e.
    """
    if not la.is_integral(e):
        raise LatticeError("e must be integral")
    e = lattice.primitive(e)
    rows = [lattice.covector(e)] + [lattice.covector(v) for v in extra]
    kernel = la.integer_kernel(rows, lattice.rank)
    if not kernel:
        return []
    # coordinates of e in the kernel basis
    coords = la.solve_any(la.transpose(kernel), e)
    if coords is None or not la.is_integral(coords):
        raise LatticeError("e is not orthogonal to the extra vectors")
    c = tuple(int(x) for x in coords)
    v = la.complete_to_unimodular(c)
    basis = la.mat_mul(la.transpose(v), kernel)  # rows: new basis, first one is e
    return [_reduce_mod(tuple(int(a) for a in b), e) for b in basis[1:]]


def parabolic_basis(lattice: LorentzLattice, e: Sequence) -> GroupGens:
    """Generators alpha_{x_1}, ..., alpha_{x_{n-1}} of the translations at the cusp e."""
    if lattice.norm(e) != 0:
        raise IsometryError("e must be isotropic")
    xs = orthogonal_complement_basis(lattice, e)
    e = lattice.primitive(e)
    return GroupGens(lattice, tuple(parabolic_map(lattice, e, x) for x in xs))


# ---------------------------------------------------------------------------
# orbit enumeration


@dataclass(frozen=True)
class OrbitPoint:
    word: str
    point: tuple  # g y, exact; same norm as the basepoint
    element: Isometry
    cosh_sq: Fraction


@dataclass(frozen=True)
class OrbitBall:
    """Orbit points g y with cosh^2 d(y, g y) <= bound.

    Expansion is breadth first by right multiplication, so consecutive points
    on a search path are one generator displacement apart and every path
    stays inside the ball. ``complete`` means the search ran out of new
    in-bound images before ``max_elements`` was reached.
    """

    basepoint: tuple
    bound: Fraction
    points: tuple
    complete: bool
    stabilizer_witness: Isometry | None = None
    beyond: int = field(default=0, compare=False)

    @property
    def truncated(self) -> bool:
        return not self.complete

    def __len__(self) -> int:
        return len(self.points)

    def words(self) -> list[tuple[str, tuple]]:
        return [(p.word, p.point) for p in self.points]


def orbit_ball(group: GroupGens, y: Sequence, cosh_sq_bound, max_elements: int = 10_000) -> OrbitBall:
    lat = group.lattice
    if not lat.in_positive_cone(y):
        raise IsometryError("basepoint must be in the open positive cone")
    if max_elements < 1:
        raise IsometryError("max_elements must be positive")
    bound = la.to_fraction(cosh_sq_bound)
    y0 = la.vec(y)
    yy = lat.norm(y0)
    gy0 = lat.covector(y0)
    gens = group.with_inverses()
    ident = identity_isometry(lat)

    found = {la.primitive_integral(y0): OrbitPoint("e", y0, ident, Fraction(1))}
    queue = deque([found[la.primitive_integral(y0)]])
    stabilizer = None
    beyond = 0
    complete = True
    while queue and complete:
        node = queue.popleft()
        for label, s in gens:
            elem = node.element @ s
            img = la.vec(la.simplify(a) for a in elem(y0))
            key = la.primitive_integral(img)
            old = found.get(key)
            if old is not None:
                if stabilizer is None and old.element.matrix != elem.matrix:
                    stabilizer = old.element.inverse() @ elem
                continue
            v = la.dot(gy0, img)
            c = Fraction(v * v) / (yy * yy)
            if c > bound:
                beyond += 1
                continue
            if len(found) >= max_elements:
                complete = False
                break
            word = label if node.word == "e" else f"{node.word} {label}"
            found[key] = OrbitPoint(word, img, elem, c)
            queue.append(found[key])
    pts = sorted(found.values(), key=lambda op: (op.cosh_sq, op.point))
    return OrbitBall(y0, bound, tuple(pts), complete, stabilizer, beyond)
