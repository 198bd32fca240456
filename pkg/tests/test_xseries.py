from fractions import Fraction
from math import factorial

import pytest

from denumerant.steppoly import StepPolynomial
from denumerant.xseries import (
    EpsSeries,
    XSeries,
    eps_exp_step_linear,
    eps_inv_one_minus_exp,
    eps_sum,
    exp_step_linear,
    inv_one_minus_exp,
    xs_sum,
)

F = Fraction


def scalar_coeffs(series: XSeries, T: int = 0) -> dict[int, Fraction]:
    return series.eval_coeffs(T)


def laurent_mul(a: dict[int, Fraction], b: dict[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, F(0)) + x * y
    return out


class TestInvOneMinusExp:
    def test_unit_rate_series(self):
        s = inv_one_minus_exp(1, 3)
        got = scalar_coeffs(s)
        assert got[-1] == -1
        assert got[0] == F(1, 2)
        assert got[1] == F(-1, 12)
        assert got[2] == 0
        assert got[3] == F(1, 720)

    def test_multiply_back_gives_one(self):
        # (1 - e^{cx}) * series == 1 exactly to truncation
        for c in (1, 2, -3, F(5, 2)):
            s = scalar_coeffs(inv_one_minus_exp(c, 5))
            one_minus_exp = {n: -F(c) ** n / factorial(n) for n in range(1, 8)}
            prod = laurent_mul(s, one_minus_exp)
            for j in range(0, 5):
                assert prod.get(j, F(0)) == (1 if j == 0 else 0)

    def test_leading_coefficient_scaling(self):
        assert scalar_coeffs(inv_one_minus_exp(2, 1))[-1] == F(-1, 2)

    def test_triple_product_leading(self):
        prod = inv_one_minus_exp(1, 2) * inv_one_minus_exp(2, 2) * inv_one_minus_exp(3, 2)
        assert scalar_coeffs(prod)[-3] == F(-1, 6)

    def test_zero_rate_rejected(self):
        with pytest.raises(ValueError, match="zero exponent rate"):
            inv_one_minus_exp(0, 3)


class TestExpStepLinear:
    def test_zero_exponent(self):
        s = exp_step_linear(StepPolynomial.zero(), 3)
        assert scalar_coeffs(s, 5) == {0: 1, 1: 0, 2: 0, 3: 0}

    def test_half_rate(self):
        L = StepPolynomial.fractional(F(1, 2))
        s = exp_step_linear(L, 2)
        assert s.coeff(0) == StepPolynomial.constant(1)
        assert s.coeff(1) == L
        assert s.coeff(2) == F(1, 2) * L * L

    def test_eval_then_exp_consistency(self):
        # coefficients at fixed T match the scalar expansion of e^{L(T) x}
        L = StepPolynomial.fractional(F(2, 3), 5) + StepPolynomial.fractional(F(1, 2), -1)
        s = exp_step_linear(L, 6)
        for T in range(6):
            v = L.eval(T)
            for n in range(7):
                assert s.coeff(n).eval(T) == v**n / factorial(n)

    def test_degree_bound_enforced(self):
        quad = StepPolynomial.fractional(F(1, 2)) ** 2
        with pytest.raises(ValueError):
            exp_step_linear(quad, 3)


class TestXSeriesOps:
    def test_mul_identity(self):
        s = inv_one_minus_exp(3, 4)
        one = XSeries(0, [StepPolynomial.constant(1)] + [StepPolynomial.zero()] * 6)
        prod = s * one
        for j in range(-1, 4):
            assert prod.coeff(j) == s.coeff(j)

    def test_pole_times_x(self):
        xinv = XSeries(-1, [StepPolynomial.constant(1)] + [StepPolynomial.zero()] * 3)
        x = XSeries(1, [StepPolynomial.constant(1)] + [StepPolynomial.zero()] * 3)
        prod = xinv * x
        assert prod.coeff(0) == StepPolynomial.constant(1)
        assert prod.coeff(1) == StepPolynomial.zero()

    def test_random_product_matches_scalar_eval(self):
        L = StepPolynomial.fractional(F(1, 3), 2)
        a = exp_step_linear(L, 5)
        b = inv_one_minus_exp(2, 5) * inv_one_minus_exp(5, 5)
        prod = a * b
        for T in (0, 1, 2, 7):
            want = laurent_mul(scalar_coeffs(a, T), scalar_coeffs(b, T))
            got = scalar_coeffs(prod, T)
            for j in got:
                assert got[j] == want.get(j, F(0))

    def test_coeff_below_pole_is_zero(self):
        s = inv_one_minus_exp(1, 3)
        assert s.coeff(-2) == StepPolynomial.zero()

    def test_coeff_above_truncation_raises(self):
        s = inv_one_minus_exp(1, 3)
        with pytest.raises(ValueError, match="insufficient truncation"):
            s.coeff(4)

    def test_validity_window_shrinks_on_mul(self):
        a = inv_one_minus_exp(1, 5)   # low -1, high 5
        b = inv_one_minus_exp(2, 3)   # low -1, high 3
        prod = a * b
        assert prod.low == -2
        assert prod.high == 2  # min(5 - 1, 3 - 1)

    def test_xs_sum_empty_is_zero(self):
        z = xs_sum([])
        assert z.is_zero_series
        assert z.coeff(1000) == StepPolynomial.zero()


class TestEpsSeries:
    def test_no_eps_dependence_identity(self):
        xs = inv_one_minus_exp(2, 3)
        e = EpsSeries.from_xseries(xs)
        assert e.constant_term() is xs

    def test_pole_cancellation(self):
        pole = XSeries(0, [StepPolynomial.constant(1)])
        five = XSeries(0, [StepPolynomial.constant(5)])
        a = EpsSeries(-1, [pole, XSeries(0, [StepPolynomial.zero()])])
        b = EpsSeries(-1, [-pole, five])
        total = eps_sum([a, b])
        ct = total.constant_term()
        assert ct.coeff(0) == StepPolynomial.constant(5)

    def test_surviving_pole_raises(self):
        pole = XSeries(0, [StepPolynomial.constant(1)])
        e = EpsSeries(-1, [pole, XSeries(0, [StepPolynomial.zero()])])
        with pytest.raises(ValueError, match="perturbation inconsistency"):
            e.constant_term()

    def test_eps_inv_matches_plain_at_eps_zero(self):
        # c != 0: the eps^0 part is the unperturbed series
        e = eps_inv_one_minus_exp(3, 7, 4, 2)
        plain = inv_one_minus_exp(3, 4)
        ct = e.coeff(0)
        for j in range(-1, 5):
            assert ct.coeff(j) == plain.coeff(j)

    def test_eps_inv_pole_structure(self):
        # c == 0: 1/(1 - e^{d eps x}) ~ -1/(d eps x) + 1/2 - (d eps x)/12 ...
        e = eps_inv_one_minus_exp(0, 2, 3, 2)
        assert e.low == -1
        assert e.coeff(-1).coeff(-1) == StepPolynomial.constant(F(-1, 2))
        assert e.coeff(0).coeff(0) == StepPolynomial.constant(F(1, 2))
        assert e.coeff(1).coeff(1) == StepPolynomial.constant(F(-2, 12))

    def test_eps_product_against_bivariate_oracle(self):
        # multiply two eps factors and compare against scalar bivariate series
        def bivariate(c, d, x_ord, e_ord):
            # dict[(m, n)] -> coefficient of eps^m x^n
            out = {}
            e = eps_inv_one_minus_exp(c, d, x_ord, e_ord)
            for m in range(e.low, e_ord + 1):
                xs = e.coeff(m)
                for n in range(xs.low, int(xs.high) + 1):
                    out[(m, n)] = xs.coeff(n).eval(0)
            return out

        a, b = bivariate(2, 1, 4, 2), bivariate(0, 3, 4, 2)
        e_prod = eps_inv_one_minus_exp(2, 1, 4, 2) * eps_inv_one_minus_exp(0, 3, 4, 2)
        for m in range(e_prod.low, int(e_prod.high) + 1):
            xs = e_prod.coeff(m)
            for n in range(xs.low, int(xs.high) + 1):
                want = F(0)
                for (m1, n1), v1 in a.items():
                    v2 = b.get((m - m1, n - n1))
                    if v2 is not None:
                        want += v1 * v2
                assert xs.coeff(n).eval(0) == want

    def test_eps_exp_structure(self):
        L = StepPolynomial.fractional(F(1, 2), 6)
        Lp = StepPolynomial.fractional(F(1, 2), 2)
        e = eps_exp_step_linear(L, Lp, 3, 2)
        for T in range(2):
            lv, lpv = L.eval(T), Lp.eval(T)
            for m in range(0, 3):
                xs = e.coeff(m)
                for n in range(m, int(xs.high) + 1):
                    want = (lv ** (n - m) / factorial(n - m)) * (lpv**m / factorial(m))
                    assert xs.coeff(n).eval(T) == want
