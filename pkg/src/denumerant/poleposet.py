"""Gcd spectrum of sublists, Mobius weights on the divisor poset, and the
periodicity predictor built from prime factorizations."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, prod
from typing import Mapping, Sequence


@dataclass(frozen=True)
class GcdSpectrum:
    """Gcds of all sublists of size > N - k, with witnesses.

    max_size[f] is the size of the largest sublist whose gcd equals f, so the
    spectrum at any intermediate threshold m (sublists of size > m) is
    {f : max_size[f] >= m + 1}.
    """

    k: int
    n: int  # list length N + 1
    values: tuple[int, ...]
    max_size: dict[int, int] = field(compare=False)
    witness: dict[int, tuple[int, ...]] = field(compare=False)

    def at_threshold(self, m: int) -> tuple[int, ...]:
        return tuple(f for f in self.values if self.max_size[f] >= m + 1)


def gcd_spectrum(alphas: Sequence[int], k: int) -> GcdSpectrum:
    """Enumerate gcds of sublists with complement size <= k."""
    n = len(alphas)
    N = n - 1
    if k < 0 or k > N:
        raise ValueError("k out of range")
    if gcd(*alphas) != 1:
        raise ValueError("list must have gcd 1")
    max_size: dict[int, int] = {}
    witness: dict[int, tuple[int, ...]] = {}
    indices = range(n)
    for csize in range(0, k + 1):
        for comp in combinations(indices, csize):
            comp_set = set(comp)
            sub = tuple(i for i in indices if i not in comp_set)
            if not sub:
                continue
            f = 0
            for i in sub:
                f = gcd(f, alphas[i])
            if max_size.get(f, -1) < len(sub):
                max_size[f] = len(sub)
                witness[f] = sub
    values = tuple(sorted(max_size))
    return GcdSpectrum(k=k, n=n, values=values, max_size=max_size, witness=witness)


def mobius(values) -> dict[int, int]:
    """Inclusion-exclusion weights on the divisibility poset of pole groups.

    mu(f) = 1 when no proper multiple of f appears; otherwise
    mu(f) = 1 - sum of mu over the proper multiples present.

    The every-pole-counted-once identity this produces relies on the value
    set being closed under pairwise gcd, which gcd spectra always are (the
    union of two witness sublists witnesses the gcd of their gcds).
    """
    if isinstance(values, GcdSpectrum):
        values = values.values
    vals = sorted(set(int(v) for v in values), reverse=True)
    if not vals:
        raise ValueError("empty spectrum")
    mu: dict[int, int] = {}
    for f in vals:
        over = [v for v in vals if v != f and v % f == 0]
        mu[f] = 1 - sum(mu[v] for v in over)
    return mu


# ---------------------------------------------------------------------------
# Prime factorization helpers (trial division, then Pollard rho)
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:  # deterministic for n < 3.3e24
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, rng: random.Random) -> int:
    while True:
        c = rng.randrange(1, n)
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(n: int, trial_limit: int = 10**6) -> dict[int, int]:
    """Prime factorization; trial division up to trial_limit, Pollard rho after."""
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p <= trial_limit and p * p <= n:
        for q in (p, p + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        p += 6
    rng = random.Random(0xD1CE)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m, rng)
        stack.append(d)
        stack.append(m // d)
    return out


def parse_factored(text: str) -> dict[int, int]:
    """Parse "p1^e1*p2^e2" (exponent defaults to 1)."""
    out: dict[int, int] = {}
    for part in text.split("*"):
        part = part.strip()
        if not part:
            raise ValueError(f"bad factored input: {text!r}")
        if "^" in part:
            p_str, e_str = part.split("^", 1)
            p, e = int(p_str), int(e_str)
        else:
            p, e = int(part), 1
        if p < 2 or e < 1:
            raise ValueError(f"bad factored input: {text!r}")
        out[p] = out.get(p, 0) + e
    return out


def value_of_factored(fac: Mapping[int, int]) -> int:
    return prod(p**e for p, e in fac.items())


# ---------------------------------------------------------------------------
# Periodicity predictor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LargestSublists:
    """Output of the fan analysis at the top periodicity threshold."""

    ell: int
    sublists: tuple[tuple[int, ...], ...]
    values: tuple[int, ...]  # spectrum at threshold ell - 1 (always contains 1)
    mu: dict[int, int] = field(compare=False)


def largest_nontrivial_sublists(
    factored: Sequence[Mapping[int, int]],
    alphas: Sequence[int] | None = None,
) -> LargestSublists:
    """Largest sublists with gcd > 1, found column-wise from the prime matrix.

    The gcds of distinct maximal sublists are pairwise coprime, the poset at
    threshold ell-1 is a fan, and the Mobius values collapse to mu(f) = 1 for
    f != 1 and mu(1) = 2 - |spectrum|.
    """
    values_from_fac = [value_of_factored(f) for f in factored]
    if alphas is not None:
        for a, v in zip(alphas, values_from_fac):
            if a != v:
                raise ValueError("inconsistent factorization")
    columns: dict[int, list[int]] = {}
    for i, fac in enumerate(factored):
        for p in fac:
            columns.setdefault(p, []).append(i)
    ell = max((len(rows) for rows in columns.values()), default=0)
    if ell == 0:
        return LargestSublists(ell=0, sublists=(), values=(1,), mu={1: 1})
    sublists = sorted({tuple(rows) for rows in columns.values() if len(rows) == ell})
    spectrum = {1}
    for sub in sublists:
        f = 0
        for i in sub:
            f = gcd(f, values_from_fac[i])
        spectrum.add(f)
    values = tuple(sorted(spectrum))
    mu = mobius(values)
    # fan closed form; the general recursion must agree
    expected = {f: (1 if f != 1 else 2 - len(values)) for f in values}
    if mu != expected:
        raise AssertionError("fan Mobius closed form violated")
    return LargestSublists(ell=ell, sublists=tuple(sublists), values=values, mu=mu)


def first_nonconstant_degree(factored: Sequence[Mapping[int, int]]) -> int:
    """Degree of the highest non-constant coefficient: ell - 1 (or -1 if none)."""
    return largest_nontrivial_sublists(factored).ell - 1
