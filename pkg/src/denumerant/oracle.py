"""Independent ground truth for desk-scale validation.

Three oracles, none of which share code with the pipeline:
  * dynamic-programming counts of the knapsack equation,
  * exact Vandermonde/Lagrange reconstruction of the quasi-polynomial from
    counts (period = lcm of the weights),
  * a cyclotomic evaluation of the root-of-unity sums behind each pole
    contribution, computed in Q[y]/Phi_d(y) with Ramanujan-sum traces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Sequence

from .pipeline import TopKResult, evaluate
from .poleposet import factorize


def dp_table(alphas: Sequence[int], t_max: int) -> list[int]:
    """counts[t] for t = 0..t_max via the classic one-dimensional recurrence."""
    counts = [0] * (t_max + 1)
    counts[0] = 1
    for a in alphas:
        for t in range(a, t_max + 1):
            counts[t] += counts[t - a]
    return counts


def count_dp(alphas: Sequence[int], t: int) -> int:
    if t < 0:
        raise ValueError("t must be non-negative")
    return dp_table(alphas, t)[t]


def genfun_counts(alphas: Sequence[int], t_max: int) -> list[int]:
    """Second oracle: truncated expansion of prod 1/(1 - z^a) by naive
    polynomial arithmetic (no shared code with dp_table)."""
    poly = [0] * (t_max + 1)
    poly[0] = 1
    for a in alphas:
        # multiply by 1/(1 - z^a) = 1 + z^a + z^{2a} + ...
        new = [0] * (t_max + 1)
        for t in range(t_max + 1):
            new[t] = poly[t] + (new[t - a] if t >= a else 0)
        poly = new
    return poly


# ---------------------------------------------------------------------------
# Interpolation of the quasi-polynomial
# ---------------------------------------------------------------------------


@dataclass
class InterpolatedQP:
    """Per-coset polynomial coefficients reconstructed from counts."""

    alphas: tuple[int, ...]
    Q: int
    N: int
    coeffs: list[list[Fraction]]  # coeffs[q][m] for 0 <= q < Q, 0 <= m <= N

    def coefficient(self, m: int, q: int) -> Fraction:
        return self.coeffs[q % self.Q][m]

    def value(self, t: int) -> Fraction:
        c = self.coeffs[t % self.Q]
        acc = Fraction(0)
        for m in range(self.N, -1, -1):
            acc = acc * t + c[m]
        return acc

    def degree_is_constant(self, m: int) -> bool:
        first = self.coeffs[0][m]
        return all(row[m] == first for row in self.coeffs)

    def coefficient_minimal_period(self, m: int) -> int:
        col = [row[m] for row in self.coeffs]
        for d in sorted(_divisors(self.Q)):
            if all(col[q] == col[(q + d) % self.Q] for q in range(self.Q)):
                return d
        return self.Q


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return out


def _lagrange_coeffs(xs: list[int], ys: list[Fraction]) -> list[Fraction]:
    """Coefficients of the unique interpolating polynomial (exact)."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        # numerator polynomial prod_{j != i} (t - x_j)
        num = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            num = [
                (num[d - 1] if d > 0 else Fraction(0)) - xs[j] * (num[d] if d < len(num) else Fraction(0))
                for d in range(len(num) + 1)
            ]
            denom *= xs[i] - xs[j]
        w = Fraction(ys[i]) / denom
        for d in range(len(num)):
            coeffs[d] += w * num[d]
    return coeffs


def interpolate_qp(alphas: Sequence[int], counts: list[int] | None = None) -> InterpolatedQP:
    """Reconstruct the quasi-polynomial with period Q = lcm(alphas).

    Each coset solves an (N+1)-point interpolation on t = q, q+Q, .., q+NQ
    and is verified on one extra point; a mismatch would mean the period
    assumption failed.
    """
    alphas = tuple(int(a) for a in alphas)
    N = len(alphas) - 1
    Q = lcm(*alphas)
    t_needed = (N + 1) * Q + Q - 1
    if counts is None:
        counts = dp_table(alphas, t_needed)
    if len(counts) <= t_needed:
        raise ValueError("insufficient precomputed counts")
    rows = []
    for q in range(Q):
        xs = [q + j * Q for j in range(N + 1)]
        ys = [Fraction(counts[x]) for x in xs]
        coeffs = _lagrange_coeffs(xs, ys)
        check_t = q + (N + 1) * Q
        acc = Fraction(0)
        for m in range(N, -1, -1):
            acc = acc * check_t + coeffs[m]
        if acc != counts[check_t]:
            raise ValueError("period assumption violated")
        rows.append(coeffs)
    return InterpolatedQP(alphas=alphas, Q=Q, N=N, coeffs=rows)


# ---------------------------------------------------------------------------
# Cyclotomic root-of-unity oracle
# ---------------------------------------------------------------------------


def _cyclotomic(d: int) -> list[int]:
    """Coefficients of Phi_d, by dividing y^d - 1 by the proper-divisor factors."""
    poly = [-1] + [0] * (d - 1) + [1]
    for e in _divisors(d):
        if e == d:
            continue
        phi_e = _cyclotomic(e)
        poly = _polydiv_exact(poly, phi_e)
    return poly


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = [Fraction(x) for x in num]
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    for d in range(len(out) - 1, -1, -1):
        c = num[d + len(den) - 1] / den[-1]
        out[d] = c
        for j, dj in enumerate(den):
            num[d + j] -= c * dj
    assert all(x == 0 for x in num[: len(den) - 1])
    return [int(x) for x in out]


def _polymod(p: list[Fraction], mod: list[int]) -> list[Fraction]:
    p = list(p)
    dm = len(mod) - 1
    while len(p) > dm:
        c = p[-1] / mod[-1]
        if c:
            for j in range(dm + 1):
                p[len(p) - 1 - dm + j] -= c * mod[j]
        p.pop()
    while len(p) < dm:
        p.append(Fraction(0))
    return p


def _polymul_mod(a: list[Fraction], b: list[Fraction], mod: list[int]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return _polymod(out, mod)


def _polyinv_mod(a: list[Fraction], mod: list[int]) -> list[Fraction]:
    """Inverse of a modulo the (squarefree, irreducible) modulus polynomial."""
    r0 = [Fraction(x) for x in mod]
    r1 = _polymod(list(a), mod)
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while any(x != 0 for x in r1):
        q, rem = _polydivmod_frac(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _polysub(s0, _polymul(q, s1))
    # r0 is a nonzero constant times gcd = constant (a invertible in the field)
    lead = next(x for x in reversed(r0) if x != 0)
    if any(x != 0 for x in r0[1:]):
        raise ValueError("non-invertible element in cyclotomic field")
    return _polymod([x / lead for x in s0], mod)


def _polydivmod_frac(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    dden = _polydeg(den)
    out = [Fraction(0)] * max(len(num) - dden, 1)
    while _polydeg(num) >= dden and any(x != 0 for x in num):
        d = _polydeg(num)
        c = num[d] / den[dden]
        out[d - dden] += c
        for j in range(dden + 1):
            num[d - dden + j] -= c * den[j]
    return out, num


def _polydeg(p: list[Fraction]) -> int:
    for i in range(len(p) - 1, -1, -1):
        if p[i] != 0:
            return i
    return -1


def _polymul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _polysub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0)) for i in range(n)]


def _ramanujan_sum(d: int, k: int) -> int:
    """Sum of zeta^k over primitive d-th roots of unity."""
    g = gcd(k % d if d > 1 else 0, d) if d > 1 else 1
    if d == 1:
        return 1
    m = d // g
    fac = factorize(m)
    mu = 1
    for p, e in fac.items():
        if e > 1:
            return 0
        mu = -mu
    phi_d = _euler_phi(d)
    phi_m = _euler_phi(m)
    return mu * (phi_d // phi_m)


def _euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def rou_series(alphas: Sequence[int], f: int, T: int, low: int, high: int) -> list[Fraction]:
    """Laurent coefficients x^low..x^high of the root-of-unity sum

        sum over zeta with zeta^f = 1 of zeta^{-T} / prod over i in J of
        (1 - zeta^{a_i} e^{a_i x}),   J = { i : f does not divide a_i }.

    Computed divisor-by-divisor over primitive d-th roots in Q[y]/Phi_d(y),
    summed with Ramanujan weights.  Entirely independent of the cone pipeline.
    """
    J = [a for a in alphas if a % f != 0]
    total = [Fraction(0)] * (high - low + 1)
    order = high - low + 1
    for d in _divisors(f):
        phi = _cyclotomic(d)
        deg = len(phi) - 1
        # split J by divisibility by d
        j0 = [a for a in J if a % d == 0]
        j1 = [a for a in J if a % d != 0]
        # rational Laurent part: prod over j0 of 1/(1 - e^{a x}), pole |j0|
        rational = [Fraction(1)]
        rat_low = 0
        for a in j0:
            inv = _scalar_inv_one_minus_exp(a, order + len(j0) + 1)
            rational = _laurent_mul(rational, inv, order + len(j0) + 1)
            rat_low -= 1
        # K_d-coefficient power series: prod over j1 of 1/(1 - y^{a} e^{a x})
        series: list[list[Fraction]] = [[Fraction(1)] + [Fraction(0)] * (deg - 1)] + [
            [Fraction(0)] * deg for _ in range(order + len(j0))
        ]
        if deg == 0:
            raise AssertionError("cyclotomic degree 0")
        for a in j1:
            ya = [Fraction(0)] * (a % d) + [Fraction(1)]
            ya = _polymod([Fraction(x) for x in ya], phi)
            # H = 1 - y^a e^{a x}; invert as power series over K_d
            h = []
            fact = 1
            for n in range(len(series)):
                coeff = [-x * Fraction(a**n, fact) for x in ya]
                if n == 0:
                    coeff[0] += 1
                h.append(_polymod(coeff, phi))
                fact *= n + 1
            inv_series = _kd_series_inverse(h, phi)
            series = _kd_series_mul(series, inv_series, phi)
        # multiply by y^{-T} = y^{(d - T mod d) mod d}
        shift = (-T) % d
        yshift = _polymod([Fraction(0)] * shift + [Fraction(1)], phi)
        series = [_polymul_mod(c, yshift, phi) for c in series]
        # trace against primitive d-th roots with Ramanujan weights
        weights = [_ramanujan_sum(d, k) for k in range(deg)]
        traced = [sum((c[k] * weights[k] for k in range(deg)), Fraction(0)) for c in series]
        # combine with the rational Laurent part (pole |j0|)
        for e in range(low, high + 1):
            acc = Fraction(0)
            for e1 in range(rat_low, min(len(rational) + rat_low, e - 0 + 1)):
                e2 = e - e1
                if 0 <= e2 < len(traced):
                    acc += rational[e1 - rat_low] * traced[e2]
            total[e - low] += acc
    return total


def _scalar_inv_one_minus_exp(c: int, terms: int) -> list[Fraction]:
    """Coefficients of x^{-1}..x^{terms-2} of 1/(1 - e^{c x}) (scalar version)."""
    # invert sum_{n>=0} (c x)^n / (n+1)! then divide by -c x
    p = []
    fact = 1
    for n in range(terms + 1):
        fact *= n + 1
        p.append(Fraction(c**n, fact))
    g = [Fraction(1)]
    for n in range(1, terms + 1):
        acc = Fraction(0)
        for j in range(1, n + 1):
            acc += p[j] * g[n - j]
        g.append(-acc)
    return [-x / c for x in g[:terms]]


def _laurent_mul(a: list[Fraction], b: list[Fraction], keep: int) -> list[Fraction]:
    out = [Fraction(0)] * min(len(a) + len(b) - 1, keep)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj and i + j < keep:
                    out[i + j] += ai * bj
    return out


def _kd_series_mul(a, b, phi):
    n = len(a)
    deg = len(phi) - 1
    out = [[Fraction(0)] * deg for _ in range(n)]
    for i in range(n):
        if all(x == 0 for x in a[i]):
            continue
        for j in range(n - i):
            if all(x == 0 for x in b[j]):
                continue
            prod_ij = _polymul_mod(a[i], b[j], phi)
            tgt = out[i + j]
            for k in range(deg):
                tgt[k] += prod_ij[k]
    return out


def _kd_series_inverse(h, phi):
    """Inverse of a K_d power series whose constant term is invertible."""
    n = len(h)
    deg = len(phi) - 1
    inv0 = _polyinv_mod(h[0], phi)
    out = [inv0] + [[Fraction(0)] * deg for _ in range(n - 1)]
    for m in range(1, n):
        acc = [Fraction(0)] * deg
        for j in range(1, m + 1):
            term = _polymul_mod(h[j], out[m - j], phi)
            for k in range(deg):
                acc[k] += term[k]
        out[m] = _polymul_mod([-x for x in acc], inv0, phi)
    return out


# ---------------------------------------------------------------------------
# Comparison reports
# ---------------------------------------------------------------------------


@dataclass
class CompareReport:
    passed: bool
    lines: list[str]

    def __str__(self) -> str:
        return "\n".join(self.lines)


def compare(
    result: TopKResult,
    alphas: Sequence[int] | None = None,
    t_max: int | None = None,
    sample_points: int = 64,
) -> CompareReport:
    """Check a pipeline result against the DP/interpolation oracles.

    Full mode demands exact integer equality on every t in 0..t_max.  Top-k
    mode compares the top coefficients coset by coset against interpolation
    and bounds the truncation remainder by C * t^{N-k-1} with C derived from
    the oracle's lower coefficients.
    """
    alphas = tuple(alphas if alphas is not None else result.original)
    lines: list[str] = []
    ok = True
    inst_alphas = result.alphas
    Q = lcm(*inst_alphas)
    if t_max is None:
        t_max = 3 * Q
    g = result.input_gcd

    if result.k == result.N:
        counts = dp_table(alphas, t_max)
        tables = {m: sp.eval_table(sp.period) for m, sp in result.coefficients.items()}
        bad = None
        for t in range(t_max + 1):
            if g != 1 and t % g != 0:
                val = Fraction(0)
            else:
                tt = t // g
                val = Fraction(0)
                for m, table in tables.items():
                    val += table[tt % len(table)] * tt**m
            if val != counts[t]:
                bad = (t, val, counts[t])
                break
        if bad is None:
            lines.append(f"full-mode equality on t=0..{t_max}: PASS")
        else:
            ok = False
            lines.append(f"full-mode equality: FAIL at t={bad[0]} (got {bad[1]}, oracle {bad[2]})")
    else:
        N, k = result.N, result.k
        ipq = interpolate_qp(inst_alphas)
        for m in sorted(result.coefficients, reverse=True):
            table = result.coefficients[m].eval_table(result.coefficients[m].period)
            mismatch = None
            for q in range(ipq.Q):
                if table[q % len(table)] != ipq.coefficient(m, q):
                    mismatch = q
                    break
            if mismatch is None:
                lines.append(f"coefficient t^{m} matches interpolation on all cosets: PASS")
            else:
                ok = False
                lines.append(f"coefficient t^{m}: FAIL at coset {mismatch}")
        # remainder growth bound on sampled t in [Q, 3Q]
        bound_c = Fraction(0)
        for m in range(0, N - k):
            bound_c += max(abs(row[m]) for row in ipq.coeffs)
        lo, hi = Q, 3 * Q
        counts = dp_table(inst_alphas, hi)
        step = max(1, (hi - lo) // sample_points)
        worst = Fraction(0)
        bad_t = None
        for t in range(lo, hi + 1, step):
            rem = abs(counts[t] - _evaluate_normalized(result, t))
            allowed = bound_c * t ** max(N - k - 1, 0)
            if rem > allowed:
                bad_t = (t, rem, allowed)
                break
            if allowed:
                worst = max(worst, Fraction(rem) / allowed)
        if bad_t is None:
            lines.append(f"truncation remainder bounded by C*t^{max(N - k - 1, 0)} (max ratio {float(worst):.3f}): PASS")
        else:
            ok = False
            lines.append(f"truncation remainder: FAIL at t={bad_t[0]} ({bad_t[1]} > {bad_t[2]})")
    return CompareReport(passed=ok, lines=lines)


def _evaluate_normalized(result: TopKResult, t: int) -> Fraction:
    total = Fraction(0)
    for m, sp in result.coefficients.items():
        total += sp.eval(t) * t**m
    return total
