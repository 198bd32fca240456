from itertools import combinations
from math import gcd, lcm

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from denumerant.poleposet import (
    factorize,
    first_nonconstant_degree,
    gcd_spectrum,
    largest_nontrivial_sublists,
    mobius,
    parse_factored,
    value_of_factored,
)


def brute_spectrum(alphas, k):
    n = len(alphas)
    out = set()
    for size in range(n - k, n + 1):
        for sub in combinations(alphas, size):
            out.add(gcd(*sub))
    return out


class TestGcdSpectrum:
    def test_paper_example_a(self):
        spec = gcd_spectrum([98, 59, 44, 100], 1)
        assert set(spec.values) == {1, 2}

    def test_paper_example_b(self):
        spec = gcd_spectrum([6, 2, 2, 3, 3], 2)
        assert set(spec.values) == {1, 2, 3}

    def test_full_spectrum_6_2_3(self):
        spec = gcd_spectrum([6, 2, 3], 2)
        assert set(spec.values) == {1, 2, 3, 6}
        assert spec.values == tuple(sorted(brute_spectrum([6, 2, 3], 2)))

    def test_witnesses_are_valid(self):
        spec = gcd_spectrum([6, 2, 2, 3, 3], 2)
        a = [6, 2, 2, 3, 3]
        for f, sub in spec.witness.items():
            assert gcd(*(a[i] for i in sub)) == f
            assert len(sub) == spec.max_size[f]

    def test_threshold_filtering(self):
        spec = gcd_spectrum([6, 2, 3], 2)
        assert spec.at_threshold(2) == (1,)
        assert set(spec.at_threshold(1)) == {1, 2, 3}
        assert set(spec.at_threshold(0)) == {1, 2, 3, 6}

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            gcd_spectrum([2, 3], 2)
        with pytest.raises(ValueError):
            gcd_spectrum([2, 3], -1)

    @given(st.lists(st.integers(1, 40), min_size=2, max_size=6), st.data())
    @settings(max_examples=60)
    def test_matches_brute_force_and_permutation_invariant(self, alphas, data):
        if gcd(*alphas) != 1:
            return
        k = data.draw(st.integers(0, len(alphas) - 1))
        spec = gcd_spectrum(alphas, k)
        assert set(spec.values) == brute_spectrum(alphas, k)
        perm = data.draw(st.permutations(alphas))
        assert set(gcd_spectrum(perm, k).values) == set(spec.values)
        # spectra are closed under pairwise gcd
        values = set(spec.values)
        assert all(gcd(a, b) in values for a in values for b in values)


def divisor_closure(values):
    out = set()
    for v in values:
        d = 1
        while d * d <= v:
            if v % d == 0:
                out.add(d)
                out.add(v // d)
            d += 1
    return out


class TestMobius:
    def test_paper_example_a(self):
        assert mobius({1, 2}) == {1: 0, 2: 1}

    def test_paper_example_b(self):
        assert mobius({1, 2, 3}) == {1: -1, 2: 1, 3: 1}

    def test_6_2_3_full(self):
        assert mobius({1, 2, 3, 6}) == {1: 0, 2: 0, 3: 0, 6: 1}

    def test_inclusion_exclusion_identity(self):
        # each pole group counted exactly once: for every divisor d of some
        # value, sum of mu(f) over values f divisible by d equals 1
        for values in ({1, 2}, {1, 2, 3}, {1, 2, 3, 6}, {1, 2, 4, 8}, {1, 2, 3, 4, 6, 12}, {1, 5, 7, 35}):
            mu = mobius(values)
            for d in divisor_closure(values):
                if any(f % d == 0 for f in values):
                    assert sum(mu[f] for f in values if f % d == 0) == 1, (values, d)

    @given(st.sets(st.integers(1, 60), min_size=1, max_size=8))
    @settings(max_examples=80)
    def test_inclusion_exclusion_property(self, values):
        # real spectra are closed under pairwise gcd (the union of two
        # witness sublists witnesses the gcd); the identity needs that
        values = values | {1}
        while True:
            closed = values | {gcd(a, b) for a in values for b in values}
            if closed == values:
                break
            values = closed
        mu = mobius(values)
        for d in divisor_closure(values):
            assert sum(mu[f] for f in values if f % d == 0) == 1


class TestFactorization:
    @given(st.integers(2, 10**9))
    @settings(max_examples=60)
    def test_factorize_reassembles(self, n):
        fac = factorize(n)
        assert value_of_factored(fac) == n
        for p in fac:
            assert all(p % q != 0 for q in range(2, min(p, 1000)) if q * q <= p)

    def test_fifteen_digit_semiprime(self):
        n = 100000000000031  # prime
        assert factorize(n) == {n: 1}
        m = 1000003 * 999983
        assert factorize(m) == {999983: 1, 1000003: 1}

    def test_parse_factored(self):
        assert parse_factored("2^2*7^4*41") == {2: 2, 7: 4, 41: 1}
        with pytest.raises(ValueError):
            parse_factored("2^0")


class TestLargestSublists:
    def test_paper_section4_example(self):
        factored = [
            {2: 2, 7: 4, 41: 1},
            {2: 1, 7: 2, 11: 1},
            {11: 4},
            {17: 3},
        ]
        res = largest_nontrivial_sublists(factored)
        assert res.ell == 2
        assert set(res.sublists) == {(0, 1), (1, 2)}
        assert set(res.values) == {1, 98, 11}
        assert res.mu == {1: -1, 98: 1, 11: 1}

    def test_pairwise_coprime_singletons(self):
        res = largest_nontrivial_sublists([{2: 1}, {3: 1}, {5: 1}])
        assert res.ell == 1
        assert set(res.sublists) == {(0,), (1,), (2,)}

    def test_partition_1_to_6(self):
        factored = [factorize(i) if i > 1 else {} for i in range(1, 7)]
        res = largest_nontrivial_sublists(factored)
        assert res.ell == 3  # evens {2, 4, 6}
        assert (1, 3, 5) in res.sublists  # 0-based indices of 2, 4, 6
        assert set(res.values) == {1, 2}

    def test_nontrivial_values_pairwise_coprime(self):
        factored = [factorize(a) for a in [98 * 4 * 41 // 4 * 4, 1078, 14641, 4913]]
        res = largest_nontrivial_sublists(factored)
        nontrivial = [f for f in res.values if f != 1]
        for i in range(len(nontrivial)):
            for j in range(i + 1, len(nontrivial)):
                assert gcd(nontrivial[i], nontrivial[j]) == 1

    def test_fan_mobius_closed_form(self):
        res = largest_nontrivial_sublists([factorize(a) for a in (6, 10, 15, 7)])
        assert all(res.mu[f] == 1 for f in res.values if f != 1)
        assert res.mu[1] == 2 - len(res.values)

    def test_inconsistent_factorization_rejected(self):
        with pytest.raises(ValueError, match="inconsistent factorization"):
            largest_nontrivial_sublists([{2: 1}], alphas=[3])


class TestFirstNonconstantDegree:
    def test_6_2_3(self):
        factored = [factorize(a) for a in (6, 2, 3)]
        assert first_nonconstant_degree(factored) == 1

    def test_2_3(self):
        assert first_nonconstant_degree([{2: 1}, {3: 1}]) == 0

    def test_partition_1_to_6(self):
        factored = [factorize(i) if i > 1 else {} for i in range(1, 7)]
        assert first_nonconstant_degree(factored) == 2

    def test_all_ones(self):
        assert first_nonconstant_degree([{}, {}]) == -1
