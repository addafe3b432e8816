"""Exact linear algebra over Q and Z.

Vectors are tuples, matrices are tuples of row tuples. Entries are ``int``
or :class:`fractions.Fraction`; nothing here ever touches a float except
:func:`floor_sqrt_bounds`, which only produces a candidate range that the
caller re-checks exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Vec = tuple
Mat = tuple


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction or an exact rational string such as ``"-3/4"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def simplify(x):
    """Return an int when the rational is integral, else the Fraction."""
    x = to_fraction(x)
    return x.numerator if x.denominator == 1 else x


def vec(xs: Iterable) -> Vec:
    return tuple(simplify(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def is_integral(v: Iterable) -> bool:
    return all(to_fraction(x).denominator == 1 for x in v)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def add(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vec:
    return tuple(c * a for a in v)


def identity(n: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: Sequence[Sequence]) -> Mat:
    return tuple(zip(*a)) if a else ()


def mat_vec(a: Sequence[Sequence], v: Sequence) -> Vec:
    return tuple(dot(row, v) for row in a)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def normalize(m: Sequence[Sequence]) -> Mat:
    """Collapse integral Fractions to ints so equal matrices compare and hash equal."""
    return tuple(tuple(simplify(x) for x in row) for row in m)


def lcm_denominator(v: Iterable) -> int:
    return reduce(math.lcm, (to_fraction(x).denominator for x in v), 1)


def primitive_integral(v: Sequence) -> Vec:
    """Positive rescaling of a nonzero rational vector to a primitive integer vector."""
    d = lcm_denominator(v)
    ints = [int(to_fraction(x) * d) for x in v]
    g = reduce(math.gcd, ints, 0)
    if g == 0:
        raise ValueError("zero vector has no primitive multiple")
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# Gaussian elimination over Q


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    rows = [[to_fraction(x) for x in r] for r in m]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[1]) if m else 0


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[Vec]:
    """Rational basis of {x : m x = 0}."""
    if not m:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    rows, pivots = rref(m)
    n = len(rows[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -rows[r][f]
        basis.append(vec(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Vec:
    """Unique solution of a x = b for square nonsingular a."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    rows, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return vec(rows[i][n] for i in range(n))


def solve_any(a: Sequence[Sequence], b: Sequence) -> Vec | None:
    """Some rational solution of a x = b (free variables set to 0), or None."""
    if not a:
        return None
    n = len(a[0])
    aug = [list(a[i]) + [b[i]] for i in range(len(a))]
    rows, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = rows[r][n]
    return vec(x)


def det(a: Sequence[Sequence]):
    n = len(a)
    rows = [[to_fraction(x) for x in r] for r in a]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        d *= rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[c][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return simplify(d)


def inverse(a: Sequence[Sequence]) -> Mat:
    n = len(a)
    aug = [list(a[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return mat(r[n:] for r in rows)


# ---------------------------------------------------------------------------
# Integer lattices


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _integer_rows(m: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for r in m:
        d = lcm_denominator(r)
        out.append([int(to_fraction(x) * d) for x in r])
    return out


def column_echelon(a: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[list[int]], int]:
    """Unimodular column reduction: returns (H, U, k) with a U = H.

    The first k columns of H are in echelon form and nonzero, the rest vanish,
    so columns k.. of U are a Z-basis of the integer kernel of ``a``.
    """
    h = [list(r) for r in a]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(p: int, j: int, s: int, t: int, x: int, y: int) -> None:
        # (col_p, col_j) <- (s col_p + t col_j, x col_p + y col_j)
        for mtx in (h, u):
            for row in mtx:
                cp, cj = row[p], row[j]
                row[p] = s * cp + t * cj
                row[j] = x * cp + y * cj

    k = 0
    for i in range(len(h)):
        if k == ncols:
            break
        for j in range(k + 1, ncols):
            y = h[i][j]
            if y == 0:
                continue
            x = h[i][k]
            g, s, t = _xgcd(x, y)
            colop(k, j, s, t, -y // g, x // g)
        if h[i][k] != 0:
            k += 1
    return h, u, k


def integer_kernel(m: Sequence[Sequence], ncols: int | None = None) -> list[Vec]:
    """Z-basis of {z in Z^n : m z = 0} for a rational matrix m."""
    if not m:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    n = len(m[0])
    _, u, k = column_echelon(_integer_rows(m), n)
    return [tuple(u[i][j] for i in range(n)) for j in range(k, n)]


def complete_to_unimodular(c: Sequence[int]) -> Mat:
    """Unimodular integer matrix whose first column is the primitive vector c."""
    n = len(c)
    _, u, _ = column_echelon([list(c)], n)
    g = sum(a * b for a, b in zip(c, (row[0] for row in u)))
    if abs(g) != 1:
        raise ValueError("vector is not primitive")
    v = transpose(inverse(u))
    if g == -1:
        v = tuple((-row[0],) + tuple(row[1:]) for row in v)
    return normalize(v)


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[list[int], Mat, Mat]:
    """Smith form of an integer matrix: returns (diag, U, V) with U a V = D.

    ``diag`` lists the nonzero invariant factors d_1 | d_2 | ... (positive).
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, r)) for r in a]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst -= q row_src
        d[dst] = [x - q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):  # col_dst -= q col_src
        for row in d:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    invariants = []
    t = 0
    while t < min(m, n):
        entries = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    add_row(t, i, q)
                    if d[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    add_col(t, j, q)
                    if d[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if d[i][j] % d[t][t]), None)
            if bad is None:
                break
            # fold the offending row into the pivot row and keep reducing
            add_row(bad[0], t, -1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        invariants.append(d[t][t])
        t += 1
    return invariants, mat(u), mat(v)


def floor_sqrt_bounds(center: Fraction, radius_sq: Fraction) -> range:
    """Candidate integers z with (z - center)^2 <= radius_sq (a superset; recheck exactly)."""
    if radius_sq < 0:
        return range(0)
    r = math.sqrt(float(radius_sq)) + 1
    c = float(center)
    return range(math.floor(c - r), math.ceil(c + r) + 1)
