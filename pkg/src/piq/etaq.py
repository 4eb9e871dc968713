"""Eta quotients and Pi-monomials as symbolic objects.

An eta quotient is a finite product prod_{delta | N} eta(delta*z)^r_delta.
A Pi-monomial is a product of Gosper constants Pi_{q^n} with half-integer
exponents; it converts to an eta quotient through
Pi_{q^n} = eta(2nz)^4 / eta(nz)^2.

The module evaluates the classical modularity conditions (the two mod-24
congruences), enumerates canonical cusp representatives of Gamma_0(N), and
computes exact rational vanishing orders at cusps, both from the eta-quotient
side and directly from Pi-exponent data.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import LevelMismatch, PreconditionViolated
from .series import ScaledSeries, eta_expansion


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@functools.lru_cache(maxsize=4096)
def _eta_power(delta: int, r: int, terms: int) -> ScaledSeries:
    return eta_expansion(delta, terms).pow(r)


def divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def index_gamma0(level: int) -> int:
    """Index of Gamma_0(N) in SL_2(Z): N * prod_{p | N} (1 + 1/p)."""
    if level < 1:
        raise ValueError("level must be positive")
    num, den = level, 1
    m, p = level, 2
    while p * p <= m:
        if m % p == 0:
            num *= p + 1
            den *= p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        num *= m + 1
        den *= m
    assert num % den == 0
    return num // den


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out twos of n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 and a % 8 in (3, 5):
            sign = -sign
    if a < 0:
        if n % 4 == 3:
            sign = -sign
        a = -a
    a %= n
    result = sign
    # Jacobi symbol on the odd part by quadratic reciprocity.
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _squarefree_kernel(n: int) -> int:
    """Sign times the product of primes dividing n to an odd power."""
    if n == 0:
        return 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    kernel = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e % 2:
                kernel *= p
        p += 1
    return sign * kernel * n


@dataclass(frozen=True)
class EtaQuotient:
    """Finite exponent map delta -> r_delta over divisors of the level."""

    level: int
    exponents: tuple[tuple[int, int], ...]

    @classmethod
    def make(cls, level: int, exponents: Mapping[int, int]) -> "EtaQuotient":
        if level < 1:
            raise ValueError("level must be positive")
        clean = {}
        for delta, r in exponents.items():
            if r == 0:
                continue
            if level % delta != 0:
                raise LevelMismatch(f"eta scale {delta} does not divide level {level}")
            clean[int(delta)] = int(r)
        return cls(level, tuple(sorted(clean.items())))

    def exponent_map(self) -> dict[int, int]:
        return dict(self.exponents)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.exponents), 2)

    def expand(self, terms: int) -> ScaledSeries:
        """q-expansion: product of eta(delta*z)^r_delta to the requested window."""
        result = ScaledSeries.one()
        for delta, r in self.exponents:
            result = result * _eta_power(delta, r, terms)
        if not self.exponents:
            return ScaledSeries.one()
        return result


@dataclass(frozen=True)
class PiMonomial:
    """Exponent vector n -> k with k a nonzero half-integer."""

    exponents: tuple[tuple[int, Fraction], ...]

    @classmethod
    def make(cls, exponents: Mapping[int, object]) -> "PiMonomial":
        clean = {}
        for n, k in exponents.items():
            k = _frac(k)
            if k == 0:
                continue
            if n < 1:
                raise ValueError("Pi index must be a positive integer")
            if (2 * k).denominator != 1:
                raise ValueError(f"Pi exponent {k} is not a half-integer")
            clean[int(n)] = k
        return cls(tuple(sorted(clean.items())))

    @classmethod
    def one(cls) -> "PiMonomial":
        return cls(())

    def exponent_map(self) -> dict[int, Fraction]:
        return dict(self.exponents)

    @property
    def weight(self) -> Fraction:
        return sum((k for _, k in self.exponents), Fraction(0))

    @property
    def exponent_weighted_sum(self) -> Fraction:
        """Sum k_i * n_i, the q^(1/4)-prefactor bookkeeping quantity."""
        return sum((k * n for n, k in self.exponents), Fraction(0))

    @property
    def valuation(self) -> Fraction:
        """Leading q-exponent: sum k_i n_i / 4."""
        return self.exponent_weighted_sum / 4

    def indices(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.exponents)

    def __mul__(self, other: "PiMonomial") -> "PiMonomial":
        acc = self.exponent_map()
        for n, k in other.exponents:
            acc[n] = acc.get(n, Fraction(0)) + k
        return PiMonomial.make(acc)

    def __pow__(self, e) -> "PiMonomial":
        e = _frac(e)
        return PiMonomial.make({n: k * e for n, k in self.exponents})

    def subst(self, j: int) -> "PiMonomial":
        return PiMonomial.make({n * j: k for n, k in self.exponents})

    def sort_key(self):
        return tuple(sorted(self.exponents))


@dataclass(frozen=True)
class Cusp:
    """Canonical representative r/s of a Gamma_0(N) cusp class, with s | N."""

    r: int
    s: int

    def __str__(self):
        return f"{self.r}/{self.s}"

    def label(self, level: int) -> str:
        if self.s == level:
            return "oo"
        if self.s == 1:
            return "0"
        return f"{self.r}/{self.s}"


@dataclass(frozen=True)
class ModularityFacts:
    """Outcome of the two mod-24 congruence checks plus weight and character data."""

    weight: Fraction
    level: int
    condition_a: bool
    condition_b: bool
    character_disc: int

    @property
    def satisfied(self) -> bool:
        return self.condition_a and self.condition_b and self.weight.denominator == 1

    def character(self, d: int) -> int:
        return kronecker_symbol(self.character_disc, d)


def pi_to_eta(p: PiMonomial, level: int) -> EtaQuotient:
    """Eta-quotient form of a Pi-monomial: r_{2n} += 4k, r_n -= 2k per index."""
    acc: dict[int, Fraction] = {}
    for n, k in p.exponents:
        if level % (2 * n) != 0:
            raise LevelMismatch(f"2*{n} does not divide level {level}")
        acc[2 * n] = acc.get(2 * n, Fraction(0)) + 4 * k
        acc[n] = acc.get(n, Fraction(0)) - 2 * k
    ints = {}
    for delta, r in acc.items():
        if r == 0:
            continue
        assert r.denominator == 1, "half-integer Pi exponents give integral eta exponents"
        ints[delta] = int(r)
    return EtaQuotient.make(level, ints)


def modularity_facts(e: EtaQuotient) -> ModularityFacts:
    """Evaluate the two mod-24 congruences, weight, and character discriminant."""
    sum_delta_r = sum(delta * r for delta, r in e.exponents)
    sum_codelta_r = sum((e.level // delta) * r for delta, r in e.exponents)
    weight = e.weight
    # s = prod delta^r_delta as a rational; the character is the Kronecker
    # symbol of (-1)^k * s, which only depends on the squarefree kernel of
    # numerator times denominator.
    s = Fraction(1)
    for delta, r in e.exponents:
        s *= Fraction(delta) ** r
    signed = s.numerator * s.denominator
    if weight.denominator == 1 and int(weight) % 2 == 1:
        signed = -signed
    return ModularityFacts(
        weight=weight,
        level=e.level,
        condition_a=sum_delta_r % 24 == 0,
        condition_b=sum_codelta_r % 24 == 0,
        character_disc=_squarefree_kernel(signed),
    )


def cusps(level: int) -> list[Cusp]:
    """One canonical representative r/s per Gamma_0(level) cusp class.

    For each divisor s of N the classes are indexed by units modulo
    gcd(s, N/s); representatives are lifted to the smallest positive r with
    gcd(r, s) = 1.  The cusp infinity is stored as 1/N and 0 as 0/1.
    """
    if level < 1:
        raise ValueError("level must be positive")
    out = []
    for s in divisors(level):
        g = math.gcd(s, level // s)
        reps = [r for r in range(1, g + 1) if math.gcd(r, g) == 1] if g > 1 else [1]
        for r in reps:
            lifted = r
            while math.gcd(lifted, s) != 1:
                lifted += g
            if s == 1:
                lifted = 0
            out.append(Cusp(lifted, s))
    return out


def cusp_width(level: int, c: Cusp) -> int:
    return level // math.gcd(c.s * c.s, level)


def cusps_equivalent(level: int, c1: Cusp, c2: Cusp) -> bool:
    """Standard Gamma_0(N) equivalence test on cusps a/c written in lowest terms."""

    def complete(a, c):
        # Extend (a, c) with gcd 1 to a matrix [[a, b], [c, d]] of determinant 1.
        g, x, y = _xgcd(a, c)
        assert g == 1
        return x, y  # d, -b with a*d - b*c = 1 -> a*x + c*y = 1

    d1, _ = complete(c1.r, c1.s)
    d2, _ = complete(c2.r, c2.s)
    # a1/c1 ~ a2/c2 iff c2*d1 == c1*d2 (mod gcd(c1*c2, N)) with d_i from the
    # completed matrices; robust for all lowest-term representatives.
    g = math.gcd(c1.s * c2.s, level)
    return (c2.s * d1 - c1.s * d2) % g == 0


def _xgcd(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def ligozat_value(e: EtaQuotient, c: Cusp) -> Fraction:
    """Raw evaluation of N/24 * sum gcd(s,delta)^2 r_delta / (gcd(s,N/s) s delta)."""
    N, s = e.level, c.s
    total = Fraction(0)
    for delta, r in e.exponents:
        total += Fraction(math.gcd(s, delta) ** 2 * r, math.gcd(s, N // s) * s * delta)
    return Fraction(N, 24) * total


def order_at_cusp(e: EtaQuotient, c: Cusp) -> Fraction:
    """Exact vanishing order of the eta quotient at the cusp r/s.

    Requires the mod-24 congruences (with integral weight) to hold; without
    them the closed formula does not compute a well-defined cusp order.
    """
    facts = modularity_facts(e)
    if not facts.satisfied:
        raise PreconditionViolated(
            "cusp-order formula requires integral weight and both mod-24 congruences"
        )
    return ligozat_value(e, c)


def pi_order_at_cusp(p: PiMonomial, c: Cusp, level: int) -> Fraction:
    """Vanishing order of a Pi-monomial at the cusp r/s, directly from exponent data."""
    N, s = level, c.s
    total = Fraction(0)
    for n, k in p.exponents:
        total += (
            Fraction(2, 1)
            * k
            / n
            * (math.gcd(s, 2 * n) ** 2 - math.gcd(s, n) ** 2)
        )
    return Fraction(N, 24 * s * math.gcd(s, N // s)) * total


def expand(e: EtaQuotient, terms: int) -> ScaledSeries:
    return e.expand(terms)


def pi_monomial_expand(p: PiMonomial, level: int, terms: int) -> ScaledSeries:
    """q-expansion of a Pi-monomial through its eta-quotient form."""
    return pi_to_eta(p, level).expand(terms)
