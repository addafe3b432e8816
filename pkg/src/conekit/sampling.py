"""Seeded random points of the positive cone and of its rational boundary."""

from __future__ import annotations

import random
from typing import Sequence

from . import linalg as la
from .enumeration import slice_classes
from .lattice import LorentzLattice


def random_interior(lattice: LorentzLattice, rng: random.Random, spread: int = 6, centre: Sequence | None = None) -> tuple:
    """Integral x = s * centre + v in the open positive cone, with s and v drawn uniformly."""
    c = la.primitive_integral(centre if centre is not None else lattice.ample)
    while True:
        s = rng.randint(1, spread)
        v = [rng.randint(-spread, spread) for _ in range(lattice.rank)]
        x = tuple(s * a + b for a, b in zip(c, v))
        if lattice.in_positive_cone(x):
            return x


def random_interiors(lattice: LorentzLattice, count: int, seed: int = 0, **kw) -> list[tuple]:
    rng = random.Random(seed)
    return [random_interior(lattice, rng, **kw) for _ in range(count)]


def isotropic_seed(lattice: LorentzLattice, max_level: int = 50) -> tuple | None:
    """A primitive integral isotropic vector of smallest level against the ample class, if any."""
    a = la.primitive_integral(lattice.ample)
    for level in range(1, max_level + 1):
        found = slice_classes(lattice, a, level, 0)
        for e in found:
            return lattice.primitive(e)
    return None


def random_isotropic(lattice: LorentzLattice, rng: random.Random, e0: Sequence, spread: int = 4) -> tuple:
    """Primitive isotropic v^2 e0 - 2 <e0, v> v for a random integral v; every rational cusp has this shape.

    In rank 2 that formula never returns e0 itself, so e0 is returned half the time.
    """
    if lattice.rank == 2 and rng.random() < 0.5:
        return lattice.primitive(e0)
    while True:
        v = [rng.randint(-spread, spread) for _ in range(lattice.rank)]
        e = tuple(lattice.norm(v) * a - 2 * lattice.pairing(e0, v) * b for a, b in zip(e0, v))
        if any(e):
            return lattice.primitive(e)
