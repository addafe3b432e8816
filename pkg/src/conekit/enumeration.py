"""Finite enumeration of integral classes on affine slices of a Lorentzian lattice.

If y is in the positive cone, Q_y(E) = 2<y,E>^2/<y,y> - <E,E> is positive
definite. Fixing <y,E> and <E,E> fixes Q_y(E), so the solutions form a finite
set of lattice points on an ellipsoid. We enumerate them with a Fincke-Pohst
search in exact rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Sequence

from . import linalg as la
from .lattice import LorentzLattice


def affine_integer_solutions(rows: Sequence[Sequence], rhs: Sequence, n: int):
    """Parametrize {E in Z^n : rows . E = rhs} as (E0, basis), or None if empty."""
    if not rows:
        return (0,) * n, [tuple(int(i == j) for j in range(n)) for i in range(n)]
    int_rows, int_rhs = [], []
    for r, b in zip(rows, rhs):
        d = la.lcm_denominator(list(r) + [b])
        int_rows.append([int(la.to_fraction(x) * d) for x in r])
        int_rhs.append(la.to_fraction(b) * d)
    h, u, k = la.column_echelon(int_rows, n)
    z = [0] * n
    for j in range(k):
        # pivot row of column j: the first row where column j is nonzero
        r = next(i for i in range(len(h)) if h[i][j] != 0)
        val = int_rhs[r] - sum(h[r][i] * z[i] for i in range(j))
        if val % h[r][j]:
            return None
        z[j] = int(val // h[r][j])
    for i in range(len(h)):
        if sum(h[i][j] * z[j] for j in range(k)) != int_rhs[i]:
            return None
    e0 = tuple(sum(u[i][j] * z[j] for j in range(n)) for i in range(n))
    basis = [tuple(u[i][j] for i in range(n)) for j in range(k, n)]
    return e0, basis


def _ldl(a: list[list[Fraction]]) -> list[list[Fraction]]:
    """Cohen's square completion: Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2."""
    m = len(a)
    q = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        q[i][i] = a[i][i] - sum(q[k][k] * q[k][i] ** 2 for k in range(i))
        if q[i][i] <= 0:
            raise ValueError("form is not positive definite on the slice")
        for j in range(i + 1, m):
            q[i][j] = (a[i][j] - sum(q[k][k] * q[k][i] * q[k][j] for k in range(i))) / q[i][i]
    return q


def ellipsoid_points(form: Sequence[Sequence], linear: Sequence, const, bound) -> Iterator[tuple[int, ...]]:
    """Integer t with t^T form t + 2 linear.t + const <= bound (form positive definite)."""
    m = len(form)
    if m == 0:
        if const <= bound:
            yield ()
        return
    a = [[la.to_fraction(x) for x in row] for row in form]
    lin = [la.to_fraction(x) for x in linear]
    # shift: Q(t) = (t + c)^T A (t + c) + const - c^T A c with A c = lin
    c = [la.to_fraction(x) for x in la.solve(a, lin)]
    rem0 = la.to_fraction(bound) - la.to_fraction(const) + sum(ci * li for ci, li in zip(c, lin))
    q = _ldl(a)
    t = [0] * m

    def rec(i: int, rem: Fraction):
        centre = -c[i] - sum(q[i][j] * (t[j] + c[j]) for j in range(i + 1, m))
        r2 = rem / q[i][i]
        for z in la.floor_sqrt_bounds(centre, r2):
            dz = (z - centre) ** 2
            if dz > r2:
                continue
            t[i] = z
            left = rem - q[i][i] * dz
            if i == 0:
                yield tuple(t)
            else:
                yield from rec(i - 1, left)

    if rem0 >= 0:
        yield from rec(m - 1, rem0)


def slice_classes(
    lattice: LorentzLattice,
    y: Sequence,
    level,
    norm,
    extra: Sequence[tuple[Sequence, object]] = (),
) -> list[tuple[int, ...]]:
    """All integral E with <y,E> = level, <E,E> = norm and <w,E> = value for (w, value) in extra.

    y must lie in the open positive cone; the result is finite and sorted.
    """
    if not lattice.in_positive_cone(y):
        raise ValueError("slice centre must be in the open positive cone")
    n = lattice.rank
    level = la.to_fraction(level)
    norm = la.to_fraction(norm)
    rows = [lattice.covector(y)] + [lattice.covector(w) for w, _ in extra]
    rhs = [level] + [la.to_fraction(v) for _, v in extra]
    sol = affine_integer_solutions(rows, rhs, n)
    if sol is None:
        return []
    e0, basis = sol
    yy = Fraction(lattice.norm(y))
    gy = lattice.covector(y)
    # M = 2 (Gy)(Gy)^T / y^2 - G, positive definite
    mq = [[2 * gy[i] * gy[j] / yy - lattice.gram[i][j] for j in range(n)] for i in range(n)]
    target = 2 * level * level / yy - norm
    if not basis:
        e = tuple(e0)
        return [e] if lattice.norm(e) == norm else []
    mb = [la.mat_vec(mq, b) for b in basis]
    form = [[la.dot(bi, mbj) for mbj in mb] for bi in basis]
    me0 = la.mat_vec(mq, e0)
    linear = [la.dot(b, me0) for b in basis]
    const = la.dot(e0, me0)
    out = []
    for t in ellipsoid_points(form, linear, const, target):
        e = tuple(e0[i] + sum(t[j] * basis[j][i] for j in range(len(basis))) for i in range(n))
        if lattice.norm(e) == norm:
            out.append(e)
    out.sort()
    return out
