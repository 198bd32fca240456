"""Truncated Laurent series with step-polynomial coefficients.

XSeries is a Laurent series in x, exact on an explicit exponent window
[low, high]; arithmetic tracks how far results stay exact.  EpsSeries adds a
second truncated Laurent layer in a perturbation variable and is used when a
cone generator pairs to zero against the knapsack weights, so the series in x
alone would hit a pole.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .steppoly import StepPolynomial, sp_sum

_INF = float("inf")
_SP_ZERO = StepPolynomial.zero()


class XSeries:
    """Laurent series in x with StepPolynomial coefficients, exact up to `high`.

    The empty series is the exact zero (valid to every order).  Stored
    coefficients below `low` are implicitly zero and that is exact: atomic
    series are built with their true pole order.
    """

    __slots__ = ("low", "coeffs", "high")

    def __init__(self, low: int, coeffs: Sequence, high=None):
        coeffs = [c if isinstance(c, StepPolynomial) else StepPolynomial.constant(c) for c in coeffs]
        if not coeffs:
            low, high = 0, _INF
        elif high is None:
            high = low + len(coeffs) - 1
        elif high != low + len(coeffs) - 1:
            raise ValueError("inconsistent truncation window")
        self.low = low
        self.coeffs = coeffs
        self.high = high

    @staticmethod
    def zero() -> "XSeries":
        return XSeries(0, [])

    @property
    def is_zero_series(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int) -> StepPolynomial:
        """Coefficient of x^j; exact zero below the pole, error above truncation."""
        if j > self.high:
            raise ValueError("insufficient truncation")
        if self.is_zero_series or j < self.low:
            return _SP_ZERO
        return self.coeffs[j - self.low]

    def truncate(self, high: int) -> "XSeries":
        if self.is_zero_series or high >= self.high:
            return self
        if high < self.low:
            # all stored coefficients fall above the window; keep a zero stub
            # so the (tighter) validity bound is not lost
            return XSeries(high, [_SP_ZERO])
        return XSeries(self.low, self.coeffs[: high - self.low + 1])

    def __add__(self, other: "XSeries") -> "XSeries":
        if not isinstance(other, XSeries):
            return NotImplemented
        if self.is_zero_series:
            return other
        if other.is_zero_series:
            return self
        low = min(self.low, other.low)
        high = min(self.high, other.high)
        if high < low:
            raise ValueError("insufficient truncation")
        coeffs = [self.coeff(j) + other.coeff(j) for j in range(low, high + 1)]
        return XSeries(low, coeffs)

    def __neg__(self) -> "XSeries":
        return XSeries(self.low, [-c for c in self.coeffs], None if self.is_zero_series else self.high)

    def __sub__(self, other: "XSeries") -> "XSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, StepPolynomial)):
            return self.scale(other)
        if not isinstance(other, XSeries):
            return NotImplemented
        if self.is_zero_series or other.is_zero_series:
            return XSeries.zero()
        low = self.low + other.low
        high = min(self.high + other.low, other.high + self.low)
        coeffs = []
        for e in range(low, high + 1):
            parts = []
            for i in range(self.low, e - other.low + 1):
                c1 = self.coeffs[i - self.low] if i <= self.high else None
                if c1 is None or not c1._terms:
                    continue
                c2 = other.coeff(e - i)
                if c2._terms:
                    parts.append(c1 * c2)
            coeffs.append(sp_sum(parts))
        return XSeries(low, coeffs)

    __rmul__ = __mul__

    def scale(self, s) -> "XSeries":
        if isinstance(s, (int, Fraction)):
            s = Fraction(s)
            if s == 0:
                return XSeries.zero()
        if self.is_zero_series:
            return self
        return XSeries(self.low, [c * s for c in self.coeffs])

    def shift(self, n: int) -> "XSeries":
        """Multiply by x^n."""
        if self.is_zero_series:
            return self
        return XSeries(self.low + n, self.coeffs)

    def eval_coeffs(self, T: int) -> dict[int, Fraction]:
        """Scalar Laurent coefficients at a fixed integer T (for cross-checks)."""
        return {self.low + i: c.eval(T) for i, c in enumerate(self.coeffs)}

    def __repr__(self) -> str:
        inner = ", ".join(f"x^{self.low + i}: {c}" for i, c in enumerate(self.coeffs))
        return f"XSeries[{inner} | O(x^{self.high + 1})]"


def xs_sum(series: Sequence[XSeries]) -> XSeries:
    """Sum with a single coefficient-merge pass per exponent."""
    nonzero = [s for s in series if not s.is_zero_series]
    if not nonzero:
        return XSeries.zero()
    low = min(s.low for s in nonzero)
    high = min(s.high for s in nonzero)
    if high < low:
        raise ValueError("insufficient truncation")
    coeffs = [sp_sum([s.coeff(j) for s in nonzero]) for j in range(low, int(high) + 1)]
    return XSeries(low, coeffs)


def eps_sum(series: Sequence["EpsSeries"]) -> "EpsSeries":
    nonzero = [s for s in series if not s.is_zero_series]
    if not nonzero:
        return EpsSeries.zero()
    low = min(s.low for s in nonzero)
    high = min(s.high for s in nonzero)
    if high < low:
        raise ValueError("insufficient truncation")
    coeffs = [xs_sum([s.coeff(m) for s in nonzero]) for m in range(low, int(high) + 1)]
    return EpsSeries(low, coeffs)


# ---------------------------------------------------------------------------
# Atomic series
# ---------------------------------------------------------------------------

_W_COEFFS: list[Fraction] = [Fraction(1)]  # coefficients of w / (e^w - 1)


def _w_coeff(n: int) -> Fraction:
    """Coefficient of w^n in w/(e^w - 1), by inverting sum w^j/(j+1)!."""
    while len(_W_COEFFS) <= n:
        m = len(_W_COEFFS)
        acc = Fraction(0)
        for j in range(1, m + 1):
            acc += Fraction(1, factorial(j + 1)) * _W_COEFFS[m - j]
        _W_COEFFS.append(-acc)
    return _W_COEFFS[n]


def inv_one_minus_exp(c, high: int) -> XSeries:
    """Expansion of 1/(1 - e^{c x}) up to x^high; the x^{-1} coefficient is -1/c."""
    c = Fraction(c)
    if c == 0:
        raise ValueError("zero exponent rate")
    coeffs = []
    cpow = Fraction(1, c)  # c^m / c at m = 0 handled via cpow starting at 1/c
    for m in range(-1, high + 1):
        coeffs.append(StepPolynomial.constant(-_w_coeff(m + 1) * cpow))
        cpow *= c
    return XSeries(-1, coeffs)


def exp_step_linear(L: StepPolynomial, high: int) -> XSeries:
    """Expansion of e^{L(T) x} up to x^high for step-linear L."""
    if L.degree > 1:
        raise ValueError("exponent must be step-linear (degree <= 1)")
    coeffs = [StepPolynomial.constant(1)]
    power = StepPolynomial.constant(1)
    for n in range(1, high + 1):
        power = power * L
        coeffs.append(power * Fraction(1, factorial(n)))
    return XSeries(0, coeffs)


# ---------------------------------------------------------------------------
# Perturbation layer
# ---------------------------------------------------------------------------


class EpsSeries:
    """Truncated Laurent series in the perturbation variable with XSeries coefficients."""

    __slots__ = ("low", "coeffs", "high")

    def __init__(self, low: int, coeffs: Sequence[XSeries], high=None):
        coeffs = list(coeffs)
        if not coeffs:
            low, high = 0, _INF
        elif high is None:
            high = low + len(coeffs) - 1
        elif high != low + len(coeffs) - 1:
            raise ValueError("inconsistent truncation window")
        self.low = low
        self.coeffs = coeffs
        self.high = high

    @staticmethod
    def zero() -> "EpsSeries":
        return EpsSeries(0, [])

    @staticmethod
    def from_xseries(xs: XSeries) -> "EpsSeries":
        return EpsSeries(0, [xs])

    @property
    def is_zero_series(self) -> bool:
        return not self.coeffs

    def coeff(self, m: int) -> XSeries:
        if m > self.high:
            raise ValueError("insufficient truncation")
        if self.is_zero_series or m < self.low:
            return XSeries.zero()
        return self.coeffs[m - self.low]

    def __add__(self, other: "EpsSeries") -> "EpsSeries":
        if not isinstance(other, EpsSeries):
            return NotImplemented
        if self.is_zero_series:
            return other
        if other.is_zero_series:
            return self
        low = min(self.low, other.low)
        high = min(self.high, other.high)
        if high < low:
            raise ValueError("insufficient truncation")
        return EpsSeries(low, [self.coeff(m) + other.coeff(m) for m in range(low, high + 1)])

    def __neg__(self) -> "EpsSeries":
        return EpsSeries(self.low, [-c for c in self.coeffs], None if self.is_zero_series else self.high)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, StepPolynomial)):
            return EpsSeries(self.low, [c * other for c in self.coeffs],
                             None if self.is_zero_series else self.high)
        if not isinstance(other, EpsSeries):
            return NotImplemented
        if self.is_zero_series or other.is_zero_series:
            return EpsSeries.zero()
        low = self.low + other.low
        high = min(self.high + other.low, other.high + self.low)
        coeffs = []
        for e in range(low, high + 1):
            acc = XSeries.zero()
            for i in range(self.low, e - other.low + 1):
                if i > self.high:
                    break
                a = self.coeffs[i - self.low]
                if a.is_zero_series:
                    continue
                b = other.coeff(e - i)
                if not b.is_zero_series:
                    acc = acc + a * b
            coeffs.append(acc)
        return EpsSeries(low, coeffs)

    __rmul__ = __mul__

    def constant_term(self) -> XSeries:
        """The order-0 coefficient; all strictly negative orders must cancel."""
        for m in range(self.low, 0):
            xs = self.coeff(m)
            if not all(c.is_zero() for c in xs.coeffs):
                raise ValueError("perturbation inconsistency")
        if self.high < 0:
            raise ValueError("insufficient truncation")
        return self.coeff(0)

    def __repr__(self) -> str:
        inner = ", ".join(f"eps^{self.low + i}: {c!r}" for i, c in enumerate(self.coeffs))
        return f"EpsSeries[{inner}]"


def eps_inv_one_minus_exp(c: int, d: int, x_high: int, e_high: int) -> EpsSeries:
    """Expansion of 1/(1 - e^{(c + d*eps) x}) in eps then x.

    With u = c + d*eps the closed form is -(1/(u x)) * W(u x) where
    W(w) = w/(e^w - 1); the x^{n-1} coefficient is -W_n * u^{n-1}.  For c = 0
    the factor carries a simple eps pole (requires d != 0).
    """
    c, d = int(c), int(d)
    if c == 0 and d == 0:
        raise ValueError("zero exponent rate")
    e_low = -1 if c == 0 else 0
    table: dict[int, list[Fraction]] = {m: [Fraction(0)] * (x_high + 2) for m in range(e_low, e_high + 1)}
    # n = 0 term: -u^{-1} at x^{-1}
    if c == 0:
        table[-1][0] = Fraction(-1, d)
    else:
        sign = Fraction(-1, c)
        for m in range(0, e_high + 1):
            table[m][0] = sign
            sign *= Fraction(-d, c)
    # n >= 1 terms: -W_n * u^{n-1} at x^{n-1}
    for n in range(1, x_high + 2):
        wn = _w_coeff(n)
        if wn == 0:
            continue
        for m in range(0, min(n - 1, e_high) + 1):
            coeff = -wn * comb(n - 1, m) * Fraction(c) ** (n - 1 - m) * Fraction(d) ** m
            if coeff:
                table[m][n] = coeff
    out = []
    for m in range(e_low, e_high + 1):
        out.append(XSeries(-1, [StepPolynomial.constant(v) for v in table[m]]))
    return EpsSeries(e_low, out)


def eps_exp_step_linear(L: StepPolynomial, Lp: StepPolynomial, x_high: int, e_high: int) -> EpsSeries:
    """Expansion of e^{(L + eps*Lp) x}: eps^m coefficient is e^{Lx} (Lp x)^m / m!."""
    base = exp_step_linear(L, x_high)
    out = []
    for m in range(0, e_high + 1):
        if m > x_high:
            # the eps^m coefficient starts at x^m, beyond the x window
            out.append(XSeries(x_high, [_SP_ZERO]))
            continue
        factor = (Lp**m) * Fraction(1, factorial(m))
        coeffs = [base.coeffs[n] * factor for n in range(0, x_high - m + 1)]
        out.append(XSeries(m, coeffs))
    return EpsSeries(0, out)
