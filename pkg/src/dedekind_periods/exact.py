"""Exact arithmetic layer: coprime pairs, cusps and classical Dedekind sums.

Rationals are :class:`fractions.Fraction`, which is always reduced with a
positive denominator and never overflows.

Argument order matters here.  The symbol ``d(p, q)`` of the reciprocity
law ``d(p,q) - d(q,-p) = (p^2+q^2-3pq+1)/(12pq)`` is the Dedekind sum with
*modulus* ``p`` and *multiplier* ``q``::

    d(p, q) = s(q, p) = sum_{i=1}^{p-1} ((i/p)) ((q i / p))

so that ``classical_symbol(p, q) == classical_dedekind_sum(q, p)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import NamedTuple, Union

__all__ = [
    "CoprimePair",
    "Cusp",
    "INF",
    "normalize",
    "sawtooth",
    "classical_dedekind_sum",
    "classical_symbol",
    "classical_reciprocity",
    "reciprocity_residual_classical",
]


class CoprimePair(NamedTuple):
    """A signed pair of coprime integers; ``(p, q)`` stands for the cusp q/p."""

    p: int
    q: int


def normalize(p: int, q: int) -> CoprimePair:
    """Validate ``(p, q)`` as an element of W.  Signs are kept as given."""
    p, q = int(p), int(q)
    if p == 0 and q == 0:
        raise ValueError("(0, 0) is not a coprime pair")
    if gcd(p, q) != 1:
        raise ValueError(f"({p}, {q}) is not coprime")
    return CoprimePair(p, q)


@dataclass(frozen=True, order=False)
class Cusp:
    """A point of P^1(Q) stored as num/den with den >= 0.

    Infinity is the unique cusp with ``den == 0`` (stored as 1/0).
    """

    num: int
    den: int

    def __post_init__(self):
        num, den = int(self.num), int(self.den)
        if num == 0 and den == 0:
            raise ValueError("0/0 is not a cusp")
        g = gcd(num, den)
        num, den = num // g, den // g
        if den < 0 or (den == 0 and num < 0):
            num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def of(cls, x: Union["Cusp", int, Fraction, str]) -> "Cusp":
        if isinstance(x, Cusp):
            return x
        if isinstance(x, str):
            s = x.strip().lower()
            if s in ("inf", "infinity", "oo", "i*inf", "iinf"):
                return INF
            x = Fraction(s)
        if isinstance(x, float):
            raise TypeError("floats are not exact cusps; pass a Fraction")
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @classmethod
    def from_pair(cls, pair) -> "Cusp":
        """The cusp q/p attached to the pair (p, q)."""
        p, q = pair
        return cls(q, p)

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def to_fraction(self) -> Fraction:
        if self.is_infinite:
            raise ValueError("infinity has no rational value")
        return Fraction(self.num, self.den)

    def to_complex(self) -> complex:
        if self.is_infinite:
            raise ValueError("infinity has no complex value")
        return complex(self.num / self.den)

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        if self.den == 1:
            return str(self.num)
        return f"{self.num}/{self.den}"

    __repr__ = __str__


INF = Cusp(1, 0)


def sawtooth(x: Fraction) -> Fraction:
    """((x)) = x - floor(x) - 1/2, and 0 at integers."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


@lru_cache(maxsize=65536)
def classical_dedekind_sum(a: int, c: int) -> Fraction:
    """s(a, c) by the finite sawtooth sum; requires c >= 1 and gcd(a, c) = 1."""
    a, c = int(a), int(c)
    if c < 1:
        raise ValueError("modulus c must be positive")
    if gcd(a, c) != 1:
        raise ValueError(f"gcd({a}, {c}) != 1")
    a %= c
    # sum_{i} ((i/c))((a i/c)) with integer arithmetic, scaled by 4c^2
    total = 0
    for i in range(1, c):
        r = (a * i) % c
        if r == 0:
            continue
        total += (2 * i - c) * (2 * r - c)
    return Fraction(total, 4 * c * c)


def classical_symbol(p: int, q: int) -> Fraction:
    """The odd symbol d(p, q) on all of W.

    d(p, q) = s(q, p) for p > 0, extended by d(-p, -q) = d(p, q) and
    d(0, +-1) = 0.
    """
    p, q = normalize(p, q)
    if p == 0:
        return Fraction(0)
    if p < 0:
        p, q = -p, -q
    return classical_dedekind_sum(q, p)


def classical_reciprocity(p: int, q: int) -> Fraction:
    """d(p,q) - d(q,-p) in closed form, valid for every signed pair.

    For p, q > 0 this is (p^2+q^2-3pq+1)/(12pq); the sign term generalizes
    to -sgn(pq)/4, and pairs with pq = 0 give 0.
    """
    p, q = normalize(p, q)
    if p == 0 or q == 0:
        return Fraction(0)
    sgn = 1 if p * q > 0 else -1
    return Fraction(p * p + q * q + 1, 12 * p * q) - Fraction(sgn, 4)


def reciprocity_residual_classical(p: int, q: int) -> Fraction:
    """d(p,q) - d(q,-p) - (p^2+q^2-3pq+1)/(12pq) for positive coprime p, q."""
    p, q = normalize(p, q)
    if p <= 0 or q <= 0:
        raise ValueError("positive p, q required")
    rhs = Fraction(p * p + q * q - 3 * p * q + 1, 12 * p * q)
    return classical_symbol(p, q) - classical_symbol(q, -p) - rhs
