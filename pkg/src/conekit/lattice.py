"""Integral lattices of signature (1, n)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

from . import linalg as la


class LatticeError(ValueError):
    """Invalid lattice data (shape, symmetry, signature, orientation)."""


class DegenerateForm(LatticeError):
    pass


class DimensionMismatch(LatticeError):
    pass


def congruence_signature(gram: Sequence[Sequence]) -> tuple[int, int]:
    """(p, q) via exact symmetric elimination; p + q < rank iff the form is degenerate."""
    a = [[la.to_fraction(x) for x in row] for row in gram]
    n = len(a)
    p = q = 0
    k = 0
    while k < n:
        if a[k][k] == 0:
            # find a usable pivot on the diagonal, else manufacture one
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    k += 1  # zero row: a null direction
                    continue
                # row_k += row_j, col_k += col_j makes a[k][k] = 2 a[k][j] + a[j][j] != 0
                a[k] = [x + y for x, y in zip(a[k], a[j])]
                for row in a:
                    row[k] += row[j]
        piv = a[k][k]
        if piv > 0:
            p += 1
        else:
            q += 1
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
            a[i][k] = Fraction(0)
        k += 1
    return p, q


@dataclass(frozen=True)
class LorentzLattice:
    """Z^rank with an integral symmetric form of signature (1, rank - 1).

    ``ample`` fixes which half of the positive cone is "positive"; it may be
    rational.
    """

    gram: tuple
    ample: tuple
    rank: int = field(init=False)

    def __post_init__(self):
        gram = la.mat(self.gram)
        n = len(gram)
        if n == 0 or any(len(r) != n for r in gram):
            raise LatticeError("gram must be a nonempty square matrix")
        if not all(la.is_integral(r) for r in gram):
            raise LatticeError("gram entries must be integers")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("gram must be symmetric")
        ample = la.vec(self.ample)
        if len(ample) != n:
            raise DimensionMismatch(f"ample has length {len(ample)}, lattice rank is {n}")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "ample", ample)
        object.__setattr__(self, "rank", n)
        p, q = congruence_signature(gram)
        if p + q < n:
            raise DegenerateForm(f"form is degenerate: signature ({p}, {q}) in rank {n}")
        if p != 1:
            raise LatticeError(f"signature is ({p}, {q}), expected (1, {n - 1})")
        if self.pairing(ample, ample) <= 0:
            raise LatticeError("ample reference class must have positive square")

    @classmethod
    def from_json(cls, doc: dict) -> "LorentzLattice":
        gram = [[la.to_fraction(x) for x in row] for row in doc["gram"]]
        lat = cls(gram, [la.to_fraction(x) for x in doc["ample"]])
        if "rank" in doc and int(doc["rank"]) != lat.rank:
            raise DimensionMismatch(f"declared rank {doc['rank']} but gram is {lat.rank}x{lat.rank}")
        return lat

    def to_json(self) -> dict:
        return {"rank": self.rank, "gram": [list(r) for r in self.gram], "ample": list(self.ample)}

    def _check(self, v: Sequence) -> None:
        if len(v) != self.rank:
            raise DimensionMismatch(f"vector of length {len(v)} used with a rank-{self.rank} lattice")

    def pairing(self, u: Sequence, v: Sequence):
        self._check(u)
        self._check(v)
        return la.simplify(la.dot(u, la.mat_vec(self.gram, v)))

    def norm(self, v: Sequence):
        return self.pairing(v, v)

    def covector(self, v: Sequence) -> tuple:
        """gram . v, so that <v, x> = covector(v) . x."""
        self._check(v)
        return la.mat_vec(self.gram, v)

    def signature(self) -> tuple[int, int]:
        return congruence_signature(self.gram)

    def in_positive_cone(self, v: Sequence) -> bool:
        return self.pairing(v, v) > 0 and self.pairing(self.ample, v) > 0

    def in_closed_positive_cone(self, v: Sequence) -> bool:
        """Nonzero v with v^2 >= 0 on the ample side."""
        if all(x == 0 for x in v):
            return False
        return self.pairing(v, v) >= 0 and self.pairing(self.ample, v) > 0

    def primitive(self, v: Sequence) -> tuple:
        """v divided by the gcd of its entries, oriented so that <ample, v> >= 0."""
        self._check(v)
        if not la.is_integral(v):
            raise LatticeError("primitive() expects an integral vector")
        ints = [int(x) for x in v]
        g = reduce(math.gcd, ints, 0)
        if g == 0:
            raise LatticeError("zero vector has no primitive multiple")
        out = tuple(x // g for x in ints)
        if self.pairing(self.ample, out) < 0:
            out = tuple(-x for x in out)
        return out

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))


def pairing(lattice: LorentzLattice, u: Sequence, v: Sequence):
    return lattice.pairing(u, v)


def signature(lattice: LorentzLattice) -> tuple[int, int]:
    return lattice.signature()


def in_positive_cone(lattice: LorentzLattice, v: Sequence) -> bool:
    return lattice.in_positive_cone(v)


def primitive(lattice: LorentzLattice, v: Sequence) -> tuple:
    return lattice.primitive(v)


def diagonal_lattice(plus: int, minus_count: int, ample: Sequence | None = None) -> LorentzLattice:
    """diag(plus, -1, ..., -1), the odd unimodular lattice I_{1,n} when plus = 1."""
    n = minus_count + 1
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = plus
    for i in range(1, n):
        gram[i][i] = -1
    return LorentzLattice(gram, ample if ample is not None else [1] + [0] * minus_count)
