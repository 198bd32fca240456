"""Exact integer/rational linear algebra for small fixed dimensions.

Everything is pure and arbitrary precision: no floats enter any computation.
Basis matrices store lattice generators as columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b == g == gcd(a, b) and g >= 0."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def ext_gcd_list(values: Sequence[int]) -> tuple[int, list[int]]:
    """Extended gcd of a list: (g, coeffs) with sum(c*v for c, v) == g > 0."""
    if not values or all(v == 0 for v in values):
        raise ValueError("degenerate gcd input")
    g = values[0]
    coeffs = [1]
    for v in values[1:]:
        if v == 0:
            coeffs.append(0)
            continue
        g2, u, w = xgcd(g, v)
        coeffs = [c * u for c in coeffs]
        coeffs.append(w)
        g = g2
    if g < 0:
        g = -g
        coeffs = [-c for c in coeffs]
    return g, coeffs


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, row-major entries."""

    entries: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Iterable[Sequence[int]]) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(x) for x in row) for row in rows))

    @staticmethod
    def from_columns(cols: Sequence[Sequence[int]]) -> "IntMatrix":
        if not cols:
            return IntMatrix(())
        n = len(cols[0])
        return IntMatrix(tuple(tuple(int(c[i]) for c in cols) for i in range(n)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(self.columns())

    def matvec(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in self.entries)


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    if not m.is_square:
        raise ValueError("determinant of non-square matrix")
    n = m.nrows
    if n == 0:
        return 1
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _solve_fraction(m: IntMatrix, rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve m * X = rhs exactly (rhs given as columns); raises on singular m."""
    n = m.nrows
    ncols = len(rhs)
    aug = [[Fraction(x) for x in row] + [rhs[c][i] for c in range(ncols)] for i, row in enumerate(m.entries)]
    for k in range(n):
        pivot = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[k], aug[pivot] = aug[pivot], aug[k]
        pv = aug[k][k]
        aug[k] = [x / pv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return [[aug[i][n + c] for i in range(n)] for c in range(ncols)]


def inverse_times(m: IntMatrix, v: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
    """Exact rational solution x of m * x = v."""
    if not m.is_square:
        raise ValueError("inverse_times needs a square matrix")
    if m.nrows == 0:
        return ()
    sol = _solve_fraction(m, [[Fraction(x) for x in v]])
    return tuple(sol[0])


def integer_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of an integer matrix with det = +-1 (result is integer)."""
    n = m.nrows
    cols = _solve_fraction(m, [[Fraction(1 if i == j else 0) for i in range(n)] for j in range(n)])
    out = []
    for col in cols:
        for x in col:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
        out.append([x.numerator for x in col])
    return IntMatrix.from_columns(out)


def hnf_kernel_basis(row: Sequence[int], modulus: int) -> IntMatrix:
    """Z-basis (as columns) of the lattice {y in Z^n : <row, y> = 0 mod modulus}.

    Built from column operations that reduce the 1 x (n+1) row [row | modulus]
    to (g, 0, ..., 0); the kernel columns are then projected back to Z^n and
    put in a triangular Hermite-style normal form for determinism.
    """
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    n = len(row)
    if n == 0:
        return IntMatrix(())
    v = [int(x) for x in row] + [modulus]
    u_cols = [[1 if i == j else 0 for i in range(n + 1)] for j in range(n + 1)]
    g = v[0]
    for i in range(1, n + 1):
        if v[i] == 0:
            continue
        if g == 0:
            # swap-like combination: move v[i] into position 0
            g2, p, q = xgcd(0, v[i])
        else:
            g2, p, q = xgcd(g, v[i])
        c0, ci = u_cols[0], u_cols[i]
        new0 = [p * a + q * b for a, b in zip(c0, ci)]
        newi = [-(v[i] // g2) * a + (g // g2) * b for a, b in zip(c0, ci)]
        u_cols[0], u_cols[i] = new0, newi
        g = g2
    kernel_cols = [col[:n] for col in u_cols[1:]]
    return _hnf_columns(IntMatrix.from_columns(kernel_cols))


def _hnf_columns(m: IntMatrix) -> IntMatrix:
    """Column-style Hermite form of a nonsingular square integer matrix.

    Lower triangular, positive diagonal, entries left of the diagonal reduced
    into [0, diagonal).
    """
    n = m.nrows
    cols = [list(c) for c in m.columns()]
    for i in range(n):
        for j in range(i + 1, n):
            if cols[j][i] == 0:
                continue
            g, p, q = xgcd(cols[i][i], cols[j][i])
            a, b = cols[i][i] // g, cols[j][i] // g
            ci, cj = cols[i], cols[j]
            cols[i] = [p * x + q * y for x, y in zip(ci, cj)]
            cols[j] = [-b * x + a * y for x, y in zip(ci, cj)]
        if cols[i][i] < 0:
            cols[i] = [-x for x in cols[i]]
        if cols[i][i] == 0:
            raise ValueError("singular kernel basis")
        for j in range(i):
            q = cols[j][i] // cols[i][i]
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[i])]
    return IntMatrix.from_columns(cols)


# ---------------------------------------------------------------------------
# LLL reduction and exact shortest-vector enumeration
# ---------------------------------------------------------------------------


def _gso(rows: list[list[int]]):
    """Exact Gram-Schmidt data: squared norms of b* and the mu coefficients."""
    n = len(rows)
    bstar = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms = []
    for i in range(n):
        vec = [Fraction(x) for x in rows[i]]
        for j in range(i):
            if norms[j] == 0:
                raise ValueError("dependent rows in lattice basis")
            mu[i][j] = sum(Fraction(a) * b for a, b in zip(rows[i], bstar[j])) / norms[j]
            vec = [x - mu[i][j] * y for x, y in zip(vec, bstar[j])]
        bstar.append(vec)
        norms.append(sum(x * x for x in vec))
    return bstar, mu, norms


def _round_half(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def _lll_rows(rows: list[list[int]], delta: Fraction) -> list[list[int]]:
    """LLL-reduce a list of independent integer vectors (exact arithmetic)."""
    b = [list(v) for v in rows]
    n = len(b)
    if n <= 1:
        return b
    _, mu, norms = _gso(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            m = _round_half(mu[k][j])
            if m:
                b[k] = [x - m * y for x, y in zip(b[k], b[j])]
                _, mu, norms = _gso(b)
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            _, mu, norms = _gso(b)
            k = max(k - 1, 1)
    return b


def _sqrt_floor_fraction(q: Fraction) -> int:
    """floor(sqrt(q)) for q >= 0."""
    if q < 0:
        return -1
    return isqrt(q.numerator * q.denominator) // q.denominator


def _enumerate_ball(rows: list[list[int]], radius2) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """All nonzero lattice vectors v = sum u_i rows[i] with |v|^2 <= radius2.

    Returns (coefficients u, vector v, |v|^2). Fincke-Pohst style search with
    exact rational window bounds.
    """
    n = len(rows)
    _, mu, norms = _gso(rows)
    radius2 = Fraction(radius2)
    out = []
    u = [0] * n

    def descend(i: int, rem: Fraction) -> None:
        if i < 0:
            if any(u):
                vec = [0] * len(rows[0])
                for c, row in zip(u, rows):
                    if c:
                        vec = [x + c * y for x, y in zip(vec, row)]
                n2 = sum(x * x for x in vec)
                if n2 <= radius2:
                    out.append((tuple(u), tuple(vec), n2))
            return
        center = -sum(u[j] * mu[j][i] for j in range(i + 1, n))
        if norms[i] == 0:
            raise ValueError("dependent rows in lattice basis")
        q = rem / norms[i]
        s = _sqrt_floor_fraction(q) + 1
        lo = _floor_fraction(center - s)
        hi = _ceil_fraction(center + s)
        for ui in range(lo, hi + 1):
            dist = (ui - center) * (ui - center) * norms[i]
            if dist <= rem:
                u[i] = ui
                descend(i - 1, rem - dist)
        u[i] = 0

    descend(n - 1, radius2)
    return out


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _canonical_sign(v: tuple[int, ...]) -> tuple[int, ...]:
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def lll_reduce(basis: IntMatrix, delta: Fraction = Fraction(3, 4)) -> IntMatrix:
    """LLL-reduce the columns of a nonsingular basis matrix (delta = 3/4)."""
    if det(basis) == 0:
        raise ValueError("singular basis")
    reduced = _lll_rows([list(c) for c in basis.columns()], delta)
    return IntMatrix.from_columns(reduced)


def shortest_vector(basis: IntMatrix) -> tuple[int, ...]:
    """Nonzero vector of minimal Euclidean norm in the column lattice.

    Ties are broken lexicographically with the first nonzero coordinate
    made positive, so the result is deterministic.
    """
    if det(basis) == 0:
        raise ValueError("singular basis")
    rows = _lll_rows([list(c) for c in basis.columns()], Fraction(3, 4))
    bound = min(sum(x * x for x in v) for v in rows)
    cand = _enumerate_ball(rows, bound)
    best = min(cand, key=lambda t: (t[2], _canonical_sign(t[1])))
    return _canonical_sign(best[1])


def nth_root_ceil(x: int, n: int) -> int:
    """Smallest integer c with c**n >= x (x >= 0)."""
    if x <= 1:
        return x
    c = int(round(x ** (1.0 / n)))
    while c ** n >= x:
        c -= 1
    while c ** n < x:
        c += 1
    return c
