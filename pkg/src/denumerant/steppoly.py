"""Step polynomials: rational combinations of products of fractional parts {r*T}.

A step polynomial is a finite sum  sum_l c_l * prod_j {r_{l,j} T}^{n_{l,j}}
with rational rates r and coefficients c.  These objects are functions of an
*integer* variable T; rates are reduced modulo 1, which is legal only because
{(r+m)T} = {rT} for every integer m once T is an integer.

A rate that reduces to 0 makes its fractional form identically zero, so any
monomial containing it vanishes.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, lcm
from typing import Iterable, Mapping, Sequence

# A factor (num, den, n) encodes {(num/den) T}^n with 0 < num < den, gcd 1.
Factor = tuple[int, int, int]
Key = tuple[Factor, ...]

_FACTOR_ORDER = lambda f: (f[1], f[0])  # noqa: E731  (canonical order: by den, then num)


def _normalize_rate(r) -> tuple[int, int] | None:
    """Reduce a rate modulo 1; None means the form {rT} is identically zero."""
    r = Fraction(r)
    r = r - floor(r)
    if r == 0:
        return None
    return (r.numerator, r.denominator)


def _merge_keys(k1: Key, k2: Key) -> Key:
    if not k1:
        return k2
    if not k2:
        return k1
    out: list[Factor] = []
    i = j = 0
    while i < len(k1) and j < len(k2):
        a, b = k1[i], k2[j]
        oa, ob = _FACTOR_ORDER(a), _FACTOR_ORDER(b)
        if oa == ob:
            out.append((a[0], a[1], a[2] + b[2]))
            i += 1
            j += 1
        elif oa < ob:
            out.append(a)
            i += 1
        else:
            out.append(b)
            j += 1
    out.extend(k1[i:])
    out.extend(k2[j:])
    return tuple(out)


class StepPolynomial:
    """Immutable step polynomial with canonical syntactic normal form.

    Normalization merges like monomials and drops zero coefficients; it does
    not attempt to resolve the polynomial relations that exist between
    fractional forms, so syntactically different objects may represent the
    same function.  Equality (==) is therefore *semantic*: both sides are
    evaluated over a full common period.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, Fraction] | None = None):
        cleaned: dict[Key, Fraction] = {}
        if terms:
            for key, c in terms.items():
                if c:
                    cleaned[key] = Fraction(c)
        object.__setattr__(self, "_terms", cleaned)

    # -- construction -------------------------------------------------

    @staticmethod
    def zero() -> "StepPolynomial":
        return _ZERO

    @staticmethod
    def constant(c) -> "StepPolynomial":
        c = Fraction(c)
        return StepPolynomial({(): c} if c else None)

    @staticmethod
    def fractional(rate, coefficient=1) -> "StepPolynomial":
        """coefficient * {rate * T}."""
        nr = _normalize_rate(rate)
        if nr is None:
            return _ZERO
        return StepPolynomial({((nr[0], nr[1], 1),): Fraction(coefficient)})

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        terms = dict(self._terms)
        for key, c in other._terms.items():
            acc = terms.get(key)
            if acc is None:
                terms[key] = c
            else:
                acc = acc + c
                if acc:
                    terms[key] = acc
                else:
                    del terms[key]
        out = StepPolynomial.__new__(StepPolynomial)
        object.__setattr__(out, "_terms", terms)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = StepPolynomial.__new__(StepPolynomial)
        object.__setattr__(out, "_terms", {k: -c for k, c in self._terms.items()})
        return out

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0 or not self._terms:
                return _ZERO
            f = Fraction(other)
            out = StepPolynomial.__new__(StepPolynomial)
            object.__setattr__(out, "_terms", {k: c * f for k, c in self._terms.items()})
            return out
        if not isinstance(other, StepPolynomial):
            return NotImplemented
        if not self._terms or not other._terms:
            return _ZERO
        terms: dict[Key, Fraction] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                key = _merge_keys(k1, k2)
                c = c1 * c2
                acc = terms.get(key)
                if acc is None:
                    terms[key] = c
                else:
                    acc = acc + c
                    if acc:
                        terms[key] = acc
                    else:
                        del terms[key]
        out = StepPolynomial.__new__(StepPolynomial)
        object.__setattr__(out, "_terms", terms)
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a step polynomial")
        out = StepPolynomial.constant(1)
        base = self
        for _ in range(n):
            out = out * base
        return out

    # -- queries --------------------------------------------------------

    @property
    def terms(self) -> dict[Key, Fraction]:
        return dict(self._terms)

    @property
    def is_constant(self) -> bool:
        return all(not key for key in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError("not a constant step polynomial")
        return self._terms.get((), Fraction(0))

    @property
    def degree(self) -> int:
        """Max total exponent over monomials (a filtration bound, 0 for constants)."""
        if not self._terms:
            return 0
        return max(sum(f[2] for f in key) for key in self._terms)

    @property
    def period(self) -> int:
        """lcm of the rate denominators: an upper bound for the minimal period."""
        p = 1
        for key in self._terms:
            for _, den, _ in key:
                p = lcm(p, den)
        return p

    def eval(self, T: int) -> Fraction:
        """Exact value at an integer argument."""
        total = Fraction(0)
        for key, c in self._terms.items():
            v = c
            for num, den, n in key:
                u = (num * T) % den
                if u == 0:
                    v = None
                    break
                f = Fraction(u, den)
                v = v * (f if n == 1 else f**n)
            if v is not None:
                total += v
        return total

    def eval_table(self, length: int) -> list[Fraction]:
        """Values at T = 0..length-1, computed with integer arithmetic."""
        if length <= 0:
            return []
        if not self._terms:
            return [Fraction(0)] * length
        prepared = []
        denom = 1
        for key, c in self._terms.items():
            dterm = c.denominator
            for _, den, n in key:
                dterm *= den**n
            denom = lcm(denom, dterm)
            prepared.append((c, key, dterm))
        acc = [0] * length
        for c, key, dterm in prepared:
            scale = c.numerator * (denom // dterm)
            cycles = [([(num * t) % den for t in range(den)], den, n) for num, den, n in key]
            for t in range(length):
                v = scale
                for cyc, den, n in cycles:
                    u = cyc[t % den]
                    if u == 0:
                        v = 0
                        break
                    v *= u if n == 1 else u**n
                if v:
                    acc[t] += v
        return [Fraction(a, denom) for a in acc]

    def is_zero(self) -> bool:
        """Semantic zero test (evaluates over one full period bound)."""
        if not self._terms:
            return True
        return all(v == 0 for v in self.eval_table(self.period))

    def minimal_period(self) -> int:
        """Smallest d dividing the period bound with eval(T+d) == eval(T) for all T."""
        p = self.period
        table = self.eval_table(p)
        for d in sorted(_divisors(p)):
            if all(table[t] == table[(t + d) % p] for t in range(p)):
                return d
        return p

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._terms == other._terms:
            return True
        p = lcm(self.period, other.period)
        return self.eval_table(p) == other.eval_table(p)

    __hash__ = None  # semantic equality is incompatible with hashing

    # -- serialization ----------------------------------------------------

    def sorted_terms(self) -> list[tuple[Key, Fraction]]:
        return sorted(
            self._terms.items(),
            key=lambda kv: (sum(f[2] for f in kv[0]), [(f[1], f[0], f[2]) for f in kv[0]]),
        )

    def to_json_obj(self) -> dict:
        return {
            "terms": [
                {
                    "c": _frac_str(c),
                    "factors": [{"r": f"{num}/{den}", "n": n} for num, den, n in key],
                }
                for key, c in self.sorted_terms()
            ]
        }

    @staticmethod
    def from_json_obj(obj: Mapping) -> "StepPolynomial":
        terms: dict[Key, Fraction] = {}
        for term in obj["terms"]:
            key: Key = ()
            dead = False
            for fac in term["factors"]:
                nr = _normalize_rate(Fraction(fac["r"]))
                if nr is None:
                    dead = True
                    break
                key = _merge_keys(key, ((nr[0], nr[1], int(fac["n"])),))
            if dead:
                continue
            c = Fraction(term["c"])
            terms[key] = terms.get(key, Fraction(0)) + c
        return StepPolynomial(terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key, c in self.sorted_terms():
            mono = " ".join(
                "{%d/%d t}" % (num, den) + (f"^{n}" if n > 1 else "") for num, den, n in key
            )
            if not mono:
                piece = _frac_str(c)
            elif c == 1:
                piece = mono
            elif c == -1:
                piece = "-" + mono
            else:
                piece = f"{_frac_str(c)} {mono}"
            parts.append(piece)
        out = parts[0]
        for piece in parts[1:]:
            out += " - " + piece[1:] if piece.startswith("-") else " + " + piece
        return out

    def __repr__(self) -> str:
        return f"StepPolynomial({self})"


def _coerce(x) -> "StepPolynomial":
    if isinstance(x, StepPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return StepPolynomial.constant(x)
    return NotImplemented


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


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


def sp_sum(polys: Iterable[StepPolynomial]) -> StepPolynomial:
    """Sum of many step polynomials with a single merge pass."""
    terms: dict[Key, Fraction] = {}
    for p in polys:
        for key, c in p._terms.items():
            acc = terms.get(key)
            if acc is None:
                terms[key] = c
            else:
                acc = acc + c
                if acc:
                    terms[key] = acc
                else:
                    del terms[key]
    out = StepPolynomial.__new__(StepPolynomial)
    object.__setattr__(out, "_terms", terms)
    return out


def step_linear(pairs: Sequence[tuple[Fraction | int, Fraction | int]]) -> StepPolynomial:
    """sum of coefficient * {rate T} for (coefficient, rate) pairs."""
    return sp_sum([StepPolynomial.fractional(rate, coefficient) for coefficient, rate in pairs])


_ZERO = StepPolynomial()
