"""Knapsack lattices and the dual-variant Barvinok decomposition.

For a pole group order f, the lattice is
    Lambda(a, f) = { y in Z^J : <a_J, y> = 0 mod f },   J = { i : f does not divide a_i },
of index f in Z^J.  The nonnegative orthant R^J_{>=0} is decomposed into
cones that are unimodular with respect to Lambda(a, f), modulo cones
containing lines.  The decomposition runs on the dual cone (index f, much
smaller than the primal bound f^{r-1}), where lower-dimensional cones may be
discarded outright, and the resulting unimodular duals are mapped back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .intlinalg import (
    IntMatrix,
    det,
    ext_gcd_list,
    hnf_kernel_basis,
    integer_inverse,
    inverse_times,
    nth_root_ceil,
    _canonical_sign,
    _enumerate_ball,
    _lll_rows,
    _solve_fraction,
)
from .steppoly import StepPolynomial, sp_sum


@dataclass(frozen=True)
class KnapsackLattice:
    """Lambda(a, f) together with the Bezout data anchoring the shifted cone."""

    f: int
    J: tuple[int, ...]            # 0-based indices with f not dividing alpha_i
    a_J: tuple[int, ...]
    basis: IntMatrix              # columns span Lambda(a, f) in Z^J
    s: tuple[int, ...]            # Bezout vector: sum s_i a_J[i] + s0 f == 1
    s0: int

    @property
    def r(self) -> int:
        return len(self.J)


@dataclass(frozen=True)
class SignedUnimodularCone:
    """One term of the signed decomposition, with cached pairing data.

    generators[j] is a vector of Lambda(a, f) in Z^J coordinates; together
    they form a basis of the lattice.  pairings[j] = <a_J, g_j> (a multiple
    of f), and s_coords are the coordinates of the Bezout vector in the
    generator basis (denominators divide f).
    """

    sign: int
    generators: tuple[tuple[int, ...], ...]
    pairings: tuple[int, ...]
    s_coords: tuple[Fraction, ...]


def build_lattice(alphas: Sequence[int], f: int) -> KnapsackLattice:
    """Construct Lambda(a, f) and a Bezout certificate for f in the gcd spectrum."""
    if f <= 0:
        raise ValueError("f must be positive")
    divisible = [a for a in alphas if a % f == 0]
    dg = 0
    for a in divisible:
        dg = gcd(dg, a)
    if f == 1:
        pass  # gcd of the full list is 1 by instance normalization
    elif dg != f:
        raise ValueError("f not in spectrum")
    J = tuple(i for i, a in enumerate(alphas) if a % f != 0)
    a_J = tuple(alphas[i] for i in J)
    basis = hnf_kernel_basis(a_J, f)
    g, coeffs = ext_gcd_list(list(a_J) + [f])
    if g != 1:
        raise ValueError("gcd(a_J + [f]) must be 1 for a spectrum value")
    lat = KnapsackLattice(f=f, J=J, a_J=a_J, basis=basis, s=tuple(coeffs[:-1]), s0=coeffs[-1])
    if lat.r and abs(det(basis)) != f:
        raise AssertionError(f"lattice index {abs(det(basis))} != f = {f}")
    return lat


def dual_cone(basis: IntMatrix) -> IntMatrix:
    """Primitive generators (columns of basis^T) of the dual of basis^{-1} R^n_{>=0}."""
    if det(basis) == 0:
        raise ValueError("singular basis")
    cols = []
    for col in basis.transpose().columns():
        g = 0
        for x in col:
            g = gcd(g, x)
        cols.append(tuple(x // g for x in col))
    return IntMatrix.from_columns(cols)


def _short_parallelepiped_vector(w_cols: list[tuple[int, ...]], index: int):
    """A nonzero z in Z^r whose coordinates lambda = W^{-1} z all satisfy
    |lambda_i| < 1, found by exact enumeration in the lattice (index * W^{-1}) Z^r.

    Minimizes the sup norm of lambda (ties: Euclidean norm, then sign-fixed
    lexicographic order), which guarantees a strict index decrease.
    """
    r = len(w_cols)
    W = IntMatrix.from_columns(w_cols)
    unit = [[Fraction(index) if i == j else Fraction(0) for i in range(r)] for j in range(r)]
    acols = _solve_fraction(W, unit)  # columns of index * W^{-1}, integer valued
    a_rows = []
    for col in acols:
        row = []
        for x in col:
            assert x.denominator == 1
            row.append(x.numerator)
        a_rows.append(row)
    reduced = _lll_rows(a_rows, Fraction(3, 4))
    # Minkowski guarantees a vector of sup norm <= index^{(r-1)/r}; every such
    # vector lies in the Euclidean ball of squared radius r * bound, so the
    # sup-norm minimum over that ball is a valid (strictly index-reducing) pick.
    bound = nth_root_ceil(index ** (2 * (r - 1)), r)
    candidates = _enumerate_ball(reduced, r * bound)
    best = min(
        candidates,
        key=lambda t: (max(abs(x) for x in t[1]), t[2], _canonical_sign(t[1])),
    )
    vprime = best[1]  # equals index * lambda
    z = inverse_times(IntMatrix.from_columns(a_rows), vprime)
    z_int = []
    for x in z:
        assert x.denominator == 1
        z_int.append(x.numerator)
    g = 0
    for x in z_int:
        g = gcd(g, x)
    z_int = [x // g for x in z_int]
    lam = inverse_times(W, z_int)
    if all(l <= 0 for l in lam):
        z_int = [-x for x in z_int]
        lam = tuple(-l for l in lam)
    assert max(abs(l) for l in lam) < 1, "parallelepiped vector too long"
    return tuple(z_int), lam


def _decompose_unimodular_dual(start_cols: list[tuple[int, ...]]):
    """Signed unimodular decomposition of cone(start_cols) w.r.t. Z^r,
    modulo lower-dimensional cones.  Children replace one generator by the
    short vector; children with zero coordinate are lower dimensional and
    dropped (legitimate on the dual side)."""
    out = []
    stack = [(1, start_cols)]
    while stack:
        sign, cols = stack.pop()
        index = abs(det(IntMatrix.from_columns(cols)))
        if index == 0:
            raise AssertionError("degenerate cone in decomposition")
        if index == 1:
            out.append((sign, cols))
            continue
        z, lam = _short_parallelepiped_vector(cols, index)
        for i in range(len(cols)):
            if lam[i] == 0:
                continue
            child = list(cols)
            child[i] = z
            child_sign = sign if lam[i] > 0 else -sign
            child_index = abs(det(IntMatrix.from_columns(child)))
            assert 0 < child_index < index, "index must strictly decrease"
            stack.append((child_sign, child))
    return out


def barvinok_decompose_dual(lat: KnapsackLattice) -> list[SignedUnimodularCone]:
    """Decompose R^J_{>=0} into cones unimodular w.r.t. Lambda(a, f).

    Runs Barvinok's recursion on the dual side in standard-lattice
    coordinates, dualizes each unimodular piece back and maps it through the
    lattice basis.  Output cones carry the pairings <a_J, g_j> and the
    coordinates of the Bezout vector in their generator basis.
    """
    if lat.r < 1:
        raise ValueError("decomposition needs a positive-dimensional lattice")
    dual_gens = dual_cone(lat.basis).columns()
    pieces = _decompose_unimodular_dual(list(dual_gens))
    cones = []
    for sign, cols in pieces:
        w = IntMatrix.from_columns(cols)
        h = integer_inverse(w)  # rows h_i satisfy <h_i, w_j> = delta_ij
        gens_z = [tuple(row) for row in h.entries]
        gens = [lat.basis.matvec(gz) for gz in gens_z]
        gmat = IntMatrix.from_columns(gens)
        if abs(det(gmat)) != lat.f:
            raise AssertionError("mapped cone is not unimodular for Lambda(a, f)")
        pairings = tuple(sum(a * x for a, x in zip(lat.a_J, g)) for g in gens)
        for p in pairings:
            if p % lat.f != 0:
                raise AssertionError("pairing not a multiple of f")
        s_coords = inverse_times(gmat, lat.s)
        for c in s_coords:
            if (lat.f * c).denominator != 1:
                raise ValueError("shift not f-periodic")
        cones.append(
            SignedUnimodularCone(
                sign=sign,
                generators=tuple(gens),
                pairings=pairings,
                s_coords=tuple(s_coords),
            )
        )
    return cones


def fractional_shift(cone: SignedUnimodularCone, lat: KnapsackLattice) -> list[StepPolynomial]:
    """Per-generator step-linear shifts {s_i T} (rates reduced modulo 1).

    The coordinates s_i of the Bezout vector in the generator basis satisfy
    f s_i in Z, so each shift is periodic in T modulo f.
    """
    out = []
    for c in cone.s_coords:
        if (lat.f * c).denominator != 1:
            raise ValueError("shift not f-periodic")
        out.append(StepPolynomial.fractional(c))
    return out


def cone_exponent(cone: SignedUnimodularCone, lat: KnapsackLattice) -> StepPolynomial:
    """The step-linear exponent l_U(T) = sum_j {s_j T} <a_J, g_j>."""
    forms = fractional_shift(cone, lat)
    return sp_sum([form * p for form, p in zip(forms, cone.pairings)])


def decomposition_to_json(cones: Sequence[SignedUnimodularCone]) -> str:
    """Debug dump of a decomposition."""
    return json.dumps(
        [
            {
                "sign": c.sign,
                "generators": [list(g) for g in c.generators],
                "pairings": list(c.pairings),
                "s_coords": [str(x) for x in c.s_coords],
            }
            for c in cones
        ],
        indent=2,
    )
