"""Top-k denumerant coefficients as step polynomials.

The degree-m coefficient of the counting quasi-polynomial is assembled as

    E_m(T) = - sum over f in the gcd spectrum at threshold m of
                 mu(f) * (residue extraction of the f-contribution series),

where each contribution series is the Laurent expansion at x = 0 of the
root-of-unity-averaged generating function, rewritten through lattice points
of unimodular cones.  The final substitution T = t is representational: the
returned step polynomials are functions of the counting variable itself.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd, lcm, prod
from typing import Mapping, Sequence

from .cones import KnapsackLattice, barvinok_decompose_dual, build_lattice, fractional_shift
from .poleposet import GcdSpectrum, gcd_spectrum, mobius
from .steppoly import StepPolynomial, sp_sum
from .xseries import (
    EpsSeries,
    XSeries,
    eps_exp_step_linear,
    eps_inv_one_minus_exp,
    eps_sum,
    exp_step_linear,
    inv_one_minus_exp,
    xs_sum,
)


class KnapsackInstance:
    """A list of positive weights, normalized so their gcd is 1.

    When the input gcd g is larger than 1 the counting function vanishes off
    g*Z and satisfies E(a)(g t) = E(a/g)(t); computations run on a/g and the
    evaluation helpers translate back.
    """

    __slots__ = ("original", "alphas", "input_gcd")

    def __init__(self, alphas: Sequence[int]):
        alphas = tuple(int(a) for a in alphas)
        if not alphas:
            raise ValueError("empty knapsack list")
        if any(a < 1 for a in alphas):
            raise ValueError("weights must be positive integers")
        g = 0
        for a in alphas:
            g = gcd(g, a)
        self.original = alphas
        self.input_gcd = g
        self.alphas = tuple(a // g for a in alphas)

    @property
    def N(self) -> int:
        return len(self.alphas) - 1

    def __repr__(self) -> str:
        return f"KnapsackInstance({list(self.original)})"


def _as_instance(a) -> KnapsackInstance:
    return a if isinstance(a, KnapsackInstance) else KnapsackInstance(a)


@dataclass
class TopKResult:
    """Top coefficients E_m for m = N-k .. N, plus bookkeeping."""

    alphas: tuple[int, ...]
    original: tuple[int, ...]
    input_gcd: int
    N: int
    k: int
    coefficients: dict[int, StepPolynomial]
    period_bound: int
    metadata: dict = field(default_factory=dict)

    def evaluate(self, t: int) -> Fraction:
        return evaluate(self, t)

    def coset_polynomials(self) -> dict[int, list[Fraction]]:
        """Per-coset polynomial coefficients (degree 0..N); full mode only."""
        if self.k != self.N:
            raise ValueError("coset expansion needs the full quasi-polynomial")
        q_all = self.period_bound
        out = {}
        tables = {m: self.coefficients[m].eval_table(self.coefficients[m].period) for m in self.coefficients}
        for q in range(q_all):
            out[q] = [tables[m][q % len(tables[m])] if m in tables else Fraction(0) for m in range(self.N + 1)]
        return out

    def to_json_obj(self) -> dict:
        return {
            "alphas": list(self.alphas),
            "original": list(self.original),
            "input_gcd": self.input_gcd,
            "N": self.N,
            "k": self.k,
            "coefficients": {str(m): sp.to_json_obj() for m, sp in sorted(self.coefficients.items())},
            "period_bound": self.period_bound,
            "metadata": self.metadata,
        }

    @staticmethod
    def from_json_obj(obj: Mapping) -> "TopKResult":
        coeffs = {int(m): StepPolynomial.from_json_obj(sp) for m, sp in obj["coefficients"].items()}
        return TopKResult(
            alphas=tuple(obj["alphas"]),
            original=tuple(obj["original"]),
            input_gcd=int(obj["input_gcd"]),
            N=int(obj["N"]),
            k=int(obj["k"]),
            coefficients=coeffs,
            period_bound=int(obj["period_bound"]),
            metadata=dict(obj.get("metadata", {})),
        )


# ---------------------------------------------------------------------------
# Per-f contribution series
# ---------------------------------------------------------------------------


def _regular_vector(zero_pairing_gens: list[tuple[int, ...]], r: int) -> tuple[int, ...]:
    """Deterministic integer vector with nonzero pairing against every given
    generator (each is nonzero, so only finitely many geometric vectors fail)."""
    m = 1
    while True:
        beta = tuple(m**i for i in range(r))
        if all(sum(b * g for b, g in zip(beta, gen)) != 0 for gen in zero_pairing_gens):
            return beta
        m += 1


def cone_sum_series(
    inst: KnapsackInstance,
    f: int,
    high: int,
    use_perturbation: str = "auto",
) -> tuple[XSeries, dict]:
    """f * M(-Ts, R^J_{>=0}, Lambda(a, f)) restricted to the line a_J x,
    as a truncated Laurent series in x exact up to x^high.

    Cones whose generators all pair nonzero against a_J restrict directly;
    only cones with a zero pairing go through the perturbation layer (their
    negative perturbation orders must cancel among themselves, because the
    full sum is regular and the other cones are individually regular).
    """
    if use_perturbation not in ("auto", "always", "never"):
        raise ValueError("use_perturbation must be auto, always or never")
    lat = build_lattice(inst.alphas, f)
    r = lat.r
    if r == 0:
        return XSeries(0, [StepPolynomial.constant(f)] + [StepPolynomial.zero()] * high), {"cones": 0, "eps": False}
    cones = barvinok_decompose_dual(lat)
    atomic_high = high + r
    force_eps = use_perturbation == "always"
    degenerate = [c for c in cones if any(p == 0 for p in c.pairings)]
    if degenerate and use_perturbation == "never":
        raise ValueError("perturbation required: a generator pairs to zero")
    stats = {"cones": len(cones), "eps": bool(degenerate or force_eps)}

    plain_parts = []
    eps_parts = []
    if degenerate or force_eps:
        zero_gens = [g for c in degenerate for g, p in zip(c.generators, c.pairings) if p == 0]
        beta = _regular_vector(zero_gens or [(1,) * r], r)
    for cone in cones:
        is_degenerate = any(p == 0 for p in cone.pairings)
        forms = fractional_shift(cone, lat)
        l_u = sp_sum([form * p for form, p in zip(forms, cone.pairings)])
        if not is_degenerate and not force_eps:
            inv_prod = inv_one_minus_exp(cone.pairings[0], atomic_high)
            for p in cone.pairings[1:]:
                inv_prod = inv_prod * inv_one_minus_exp(p, atomic_high)
            term = exp_step_linear(l_u, atomic_high) * inv_prod
            plain_parts.append(term if cone.sign > 0 else -term)
        else:
            d_pair = tuple(sum(b * g for b, g in zip(beta, gen)) for gen in cone.generators)
            e_high = sum(1 for p in cone.pairings if p == 0)
            l_up = sp_sum([form * d for form, d in zip(forms, d_pair)])
            const = eps_inv_one_minus_exp(cone.pairings[0], d_pair[0], atomic_high, e_high)
            for p, d in zip(cone.pairings[1:], d_pair[1:]):
                const = const * eps_inv_one_minus_exp(p, d, atomic_high, e_high)
            term = eps_exp_step_linear(l_u, l_up, atomic_high, e_high) * const
            eps_parts.append(term if cone.sign > 0 else -term)
    total = xs_sum(plain_parts)
    if eps_parts:
        total = total + eps_sum(eps_parts).constant_term()
    return total.scale(f).truncate(high), stats


def contribution_series(
    inst: KnapsackInstance | Sequence[int],
    f: int,
    high: int | None = None,
    use_perturbation: str = "auto",
    _stats: dict | None = None,
) -> XSeries:
    """Laurent expansion of the f-contribution generating function.

    The cone sum handles the weights not divisible by f; the remaining
    weights contribute plain 1/(1-e^{a_i x}) factors.  The pole order at
    x = 0 is at most N+1.
    """
    inst = _as_instance(inst)
    N = inst.N
    if high is None:
        high = 0
    b_weights = [a for a in inst.alphas if a % f == 0]
    cone_part, stats = cone_sum_series(inst, f, high + len(b_weights), use_perturbation)
    series = cone_part
    atomic_high = high + len(b_weights) + (N + 1)
    for a in b_weights:
        series = series * inv_one_minus_exp(a, atomic_high)
    if _stats is not None:
        _stats.update(stats)
    if series.low < -(N + 1):
        raise AssertionError("pole order exceeds N + 1")
    if series.high < high:
        raise AssertionError("window bookkeeping error")
    return series.truncate(high)


def coefficient_extract(series: XSeries, i: int) -> StepPolynomial:
    """E_i(f)(T): the x^{-1} coefficient of ((-x)^i / i!) * series."""
    if i < 0:
        raise ValueError("negative degree")
    c = series.coeff(-(i + 1))
    sign = 1 if i % 2 == 0 else -1
    return c * Fraction(sign, factorial(i))


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------


def _series_job(args) -> tuple[int, XSeries, dict]:
    alphas, f, high, use_perturbation = args
    stats: dict = {}
    series = contribution_series(KnapsackInstance(alphas), f, high, use_perturbation, _stats=stats)
    return f, series, stats


def top_k(
    a: KnapsackInstance | Sequence[int],
    k: int,
    use_perturbation: str = "auto",
    jobs: int | None = None,
    time_limit: float | None = None,
) -> TopKResult:
    """Compute the coefficients of t^m for m = N-k .. N.

    Each degree uses its own spectrum threshold and Mobius table, so the
    returned coefficients are the true quasi-polynomial coefficients, not
    partial sums.  With `time_limit` set, coefficients are produced from the
    top degree down until the budget is exhausted (the protocol used for
    benchmark families).
    """
    inst = _as_instance(a)
    N = inst.N
    if k < 0 or k > N:
        raise ValueError("k out of range")
    start = time.perf_counter()
    spectrum = gcd_spectrum(inst.alphas, k)
    thresholds = {m: spectrum.at_threshold(m) for m in range(N - k, N + 1)}
    mob = {m: mobius(vals) for m, vals in thresholds.items()}
    needed: dict[int, int] = {}
    for m in range(N, N - k - 1, -1):
        for f in thresholds[m]:
            if mob[m][f] != 0:
                needed[f] = min(needed.get(f, m), m)
    high_for = {f: -(m_min + 1) for f, m_min in needed.items()}

    series_cache: dict[int, XSeries] = {}
    per_f_meta: dict[int, dict] = {}
    jobs = jobs if jobs is not None else int(os.environ.get("DENUMERANT_JOBS", "1") or 1)
    if jobs > 1 and len(needed) > 1 and time_limit is None:
        from concurrent.futures import ProcessPoolExecutor

        args = [(inst.alphas, f, high_for[f], use_perturbation) for f in sorted(needed)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for f, series, stats in pool.map(_series_job, args):
                series_cache[f] = series
                per_f_meta[f] = stats
    coefficients: dict[int, StepPolynomial] = {}
    truncated_at: int | None = None
    for m in range(N, N - k - 1, -1):
        if time_limit is not None and time.perf_counter() - start > time_limit and m != N:
            truncated_at = m
            break
        parts = []
        for f in thresholds[m]:
            mu_f = mob[m][f]
            if mu_f == 0:
                continue
            if f not in series_cache:
                stats: dict = {}
                t0 = time.perf_counter()
                series_cache[f] = contribution_series(inst, f, high_for[f], use_perturbation, _stats=stats)
                stats["seconds"] = round(time.perf_counter() - t0, 6)
                per_f_meta[f] = stats
            parts.append(coefficient_extract(series_cache[f], m) * (-mu_f))
        coefficients[m] = sp_sum(parts)
    _check_output_invariants(inst, coefficients, thresholds)
    period_bound = 1
    for sp in coefficients.values():
        period_bound = lcm(period_bound, sp.period)
    meta = {
        "per_f": {str(f): per_f_meta[f] for f in sorted(per_f_meta)},
        "normalized": inst.input_gcd != 1,
        "elapsed_seconds": round(time.perf_counter() - start, 6),
    }
    if truncated_at is not None:
        meta["time_limit_stopped_before_degree"] = truncated_at
    return TopKResult(
        alphas=inst.alphas,
        original=inst.original,
        input_gcd=inst.input_gcd,
        N=N,
        k=k,
        coefficients=coefficients,
        period_bound=period_bound,
        metadata=meta,
    )


def _check_output_invariants(inst, coefficients, thresholds) -> None:
    N = inst.N
    if N in coefficients:
        top = coefficients[N]
        expected = Fraction(1, factorial(N) * prod(inst.alphas))
        if not (top.is_constant and top.constant_value() == expected):
            raise AssertionError(f"leading coefficient {top} != {expected} on {inst.alphas}")
    for m, sp in coefficients.items():
        if sp.degree > N - m:
            raise AssertionError(f"degree bound violated at m={m}: {sp.degree} > {N - m}")
        bound = 1
        for f in thresholds[m]:
            bound = lcm(bound, f)
        if bound % sp.period != 0:
            raise AssertionError(f"period bound violated at m={m}")


def full_quasipolynomial(a: KnapsackInstance | Sequence[int], **kwargs) -> TopKResult:
    """All N+1 coefficients (top_k with k = N)."""
    inst = _as_instance(a)
    return top_k(inst, inst.N, **kwargs)


def evaluate(result: TopKResult, t: int) -> Fraction:
    """Exact value of the (possibly truncated) quasi-polynomial at t >= 0.

    Results are computed for the normalized list; inputs with gcd g > 1
    count zero off g*Z and are rescaled on it.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if result.input_gcd != 1:
        if t % result.input_gcd != 0:
            return Fraction(0)
        t //= result.input_gcd
    total = Fraction(0)
    for m, sp in result.coefficients.items():
        total += sp.eval(t) * t**m
    return total
