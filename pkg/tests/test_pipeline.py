import random
from fractions import Fraction
from math import factorial, lcm, prod

import pytest

from denumerant.oracle import dp_table, interpolate_qp
from denumerant.pipeline import (
    KnapsackInstance,
    TopKResult,
    coefficient_extract,
    contribution_series,
    evaluate,
    full_quasipolynomial,
    top_k,
)
from denumerant.steppoly import StepPolynomial

F = Fraction

EXAMPLE_COSETS = {
    0: [F(1), F(1, 4), F(1, 72)],
    1: [F(-5, 72), F(1, 18), F(1, 72)],
    2: [F(5, 9), F(7, 36), F(1, 72)],
    3: [F(3, 8), F(1, 6), F(1, 72)],
    4: [F(2, 9), F(5, 36), F(1, 72)],
    5: [F(7, 72), F(1, 9), F(1, 72)],
}


class TestInstance:
    def test_normalization(self):
        inst = KnapsackInstance([4, 6, 10])
        assert inst.input_gcd == 2
        assert inst.alphas == (2, 3, 5)
        assert inst.original == (4, 6, 10)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            KnapsackInstance([])
        with pytest.raises(ValueError):
            KnapsackInstance([3, 0])


class TestContributionSeries:
    def test_f1_has_no_t_dependence_and_schur_pole(self):
        inst = KnapsackInstance([6, 2, 3])
        series = contribution_series(inst, 1, 0)
        assert all(c.is_constant for c in series.coeffs)
        n = inst.N
        assert series.coeff(-(n + 1)) == F((-1) ** (n + 1), prod(inst.alphas))

    def test_coefficients_periodic_mod_f(self):
        inst = KnapsackInstance([6, 2, 3])
        for f in (2, 3, 6):
            series = contribution_series(inst, f, 0)
            for c in series.coeffs:
                assert f % c.period == 0
                for T in range(2 * f):
                    assert c.eval(T) == c.eval(T + f)

    def test_extract_degree_n_f1(self):
        inst = KnapsackInstance([6, 2, 3])
        series = contribution_series(inst, 1, 0)
        e2 = coefficient_extract(series, 2)
        # E_2 = -mu(1) * extract = extract with the final global sign;
        # the raw extraction is -1/72 so the assembled coefficient is +1/72
        assert e2 == StepPolynomial.constant(F(-1, 72))

    def test_extract_constant_series(self):
        series = contribution_series(KnapsackInstance([2, 3]), 1, 0)
        assert coefficient_extract(series, 0) == series.coeff(-1)

    def test_extract_above_pole_is_zero(self):
        inst = KnapsackInstance([6, 2, 3])
        series = contribution_series(inst, 1, 0)
        assert coefficient_extract(series, 5).is_zero()

    def test_insufficient_truncation_raises(self):
        inst = KnapsackInstance([6, 2, 3])
        series = contribution_series(inst, 1, -2)
        with pytest.raises(ValueError, match="insufficient truncation"):
            series.coeff(-1)


class TestExample1:
    def test_coefficients_exact(self):
        res = full_quasipolynomial([6, 2, 3])
        half = StepPolynomial.fractional(F(1, 2))
        neg3 = StepPolynomial.fractional(F(-1, 3))
        assert res.coefficients[2] == StepPolynomial.constant(F(1, 72))
        assert res.coefficients[1] == F(1, 4) - F(1, 6) * neg3 - F(1, 6) * half
        assert res.coefficients[0] == (
            1 - F(3, 2) * neg3 - F(3, 2) * half + F(1, 2) * neg3**2 + neg3 * half + F(1, 2) * half**2
        )

    def test_cosets_exact(self):
        res = full_quasipolynomial([6, 2, 3])
        assert res.period_bound == 6
        assert res.coset_polynomials() == EXAMPLE_COSETS

    def test_point_values(self):
        res = full_quasipolynomial([6, 2, 3])
        assert evaluate(res, 6) == 3  # (1,0,0), (0,3,0), (0,0,2)
        assert evaluate(res, 1) == 0
        assert evaluate(res, 0) == 1


class TestTopK:
    def test_two_ones(self):
        res = top_k([1, 1], 1)
        assert res.coefficients[1] == StepPolynomial.constant(1)
        assert res.coefficients[0] == StepPolynomial.constant(1)

    def test_random_3digit_topk_period(self):
        res = top_k([98, 59, 44, 100], 1)
        assert res.coefficients[3] == StepPolynomial.constant(F(1, factorial(3) * 98 * 59 * 44 * 100))
        assert res.coefficients[2].period in (1, 2)
        ipq = interpolate_qp([98, 59, 44, 100])
        table = res.coefficients[2].eval_table(res.coefficients[2].period)
        for q in range(ipq.Q):
            assert table[q % len(table)] == ipq.coefficient(2, q)

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            top_k([2, 3], 2)

    def test_schur_leading_random(self):
        rng = random.Random(7)
        for _ in range(10):
            n = rng.randint(1, 6)
            alphas = [rng.randint(1, 500) for _ in range(n + 1)]
            inst = KnapsackInstance(alphas)
            res = top_k(inst, 0)
            top = res.coefficients[inst.N]
            assert top == StepPolynomial.constant(F(1, factorial(inst.N) * prod(inst.alphas)))

    def test_topk_consistency_across_k(self):
        for alphas in ([6, 2, 3], [5, 13, 2, 8, 3], [8, 12, 11]):
            full = full_quasipolynomial(alphas)
            n = full.N
            for k in range(n):
                partial = top_k(alphas, k)
                for m, sp in partial.coefficients.items():
                    assert sp == full.coefficients[m], (alphas, k, m)

    def test_degree_and_period_bounds(self):
        res = full_quasipolynomial([5, 13, 2, 8, 3])
        for m, sp in res.coefficients.items():
            assert sp.degree <= res.N - m

    def test_metadata_records_eps(self):
        res = full_quasipolynomial([5, 13, 2, 8, 3])
        assert any(v["eps"] for v in res.metadata["per_f"].values())


class TestFullAgainstDP:
    @pytest.mark.parametrize(
        "alphas",
        [[2, 3], [1, 1], [6, 2, 3], [1, 1, 2], [5, 13, 2, 8, 3], [5, 3, 1, 4, 2], [4, 6, 10, 15]],
    )
    def test_matches_dp(self, alphas):
        res = full_quasipolynomial(alphas)
        t_max = min(3 * lcm(*alphas), 400)
        counts = dp_table(alphas, t_max)
        for t in range(t_max + 1):
            assert evaluate(res, t) == counts[t], (alphas, t)

    def test_floor_formula_2_3(self):
        res = full_quasipolynomial([2, 3])
        for t in range(0, 60):
            want = sum(1 for x in range(0, t // 2 + 1) if (t - 2 * x) % 3 == 0)
            assert evaluate(res, t) == want

    def test_table1_number2_to_500(self):
        res = full_quasipolynomial([5, 13, 2, 8, 3])
        counts = dp_table([5, 13, 2, 8, 3], 500)
        for t in range(501):
            assert evaluate(res, t) == counts[t]

    def test_normalized_instance_evaluation(self):
        res = full_quasipolynomial([4, 6, 10])
        counts = dp_table([4, 6, 10], 120)
        for t in range(121):
            assert evaluate(res, t) == counts[t]


class TestPerturbationRoutes:
    def test_always_matches_auto(self):
        for alphas in ([6, 2, 3], [5, 13, 2, 8, 3], [1, 1, 2], [4, 6, 10, 15]):
            auto = full_quasipolynomial(alphas, use_perturbation="auto")
            forced = full_quasipolynomial(alphas, use_perturbation="always")
            assert set(auto.coefficients) == set(forced.coefficients)
            for m in auto.coefficients:
                assert auto.coefficients[m] == forced.coefficients[m], (alphas, m)

    def test_never_raises_on_degenerate(self):
        inst = KnapsackInstance([5, 13, 2, 8, 3])
        with pytest.raises(ValueError, match="perturbation required"):
            full_quasipolynomial(inst, use_perturbation="never")

    def test_degenerate_fixture_matches_dp(self):
        # f = 15 of this instance has a generator annihilated by a_J
        res = full_quasipolynomial([4, 6, 10, 15])
        counts = dp_table([4, 6, 10, 15], 200)
        assert all(evaluate(res, t) == counts[t] for t in range(201))


class TestTruncationError:
    def test_remainder_degree_bound(self):
        alphas = [6, 2, 3]
        full = full_quasipolynomial(alphas)
        counts = dp_table(alphas, 72)
        for k in (0, 1):
            res = top_k(alphas, k)
            n = res.N
            # remainder has degree < N - k: check |rem| <= C * t^{N-k-1}
            rem_coeffs = [full.coefficients[m] for m in range(0, n - k)]
            c_bound = sum(
                max(abs(v) for v in sp.eval_table(max(sp.period, 1))) for sp in rem_coeffs
            )
            for t in range(12, 73):
                rem = abs(counts[t] - evaluate(res, t))
                assert rem <= c_bound * t ** (n - k - 1)


class TestSerialization:
    def test_json_round_trip(self):
        res = top_k([6, 2, 3], 1)
        obj = res.to_json_obj()
        back = TopKResult.from_json_obj(obj)
        assert back.to_json_obj() == obj
        assert back.coefficients[1] == res.coefficients[1]

    def test_jobs_env_parallel_map(self):
        serial = full_quasipolynomial([6, 2, 3])
        parallel = full_quasipolynomial([6, 2, 3], jobs=2)
        for m in serial.coefficients:
            assert serial.coefficients[m] == parallel.coefficients[m]


class TestTimeLimit:
    def test_zero_budget_keeps_leading_term(self):
        res = top_k([5, 13, 2, 8, 3], 4, time_limit=0.0)
        assert 4 in res.coefficients
        assert "time_limit_stopped_before_degree" in res.metadata
