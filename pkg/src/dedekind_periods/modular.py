"""SL(2,Z) matrices, Moebius actions and normal forms in PSL(2,Z) = Z/2 * Z/3."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

import numpy as np

from .exact import INF, Cusp

__all__ = [
    "Matrix",
    "IDENTITY",
    "SIGMA",
    "TAU",
    "THETA",
    "GENERATORS",
    "act_cusp",
    "act_moebius",
    "decompose",
    "recompose",
    "word_matrix",
    "random_word",
    "random_matrix",
    "reduce_to_fundamental_domain",
]


@dataclass(frozen=True)
class Matrix:
    """An integer matrix [[a, b], [c, d]] with ad - bc = 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.entries} is not 1")

    @property
    def entries(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Matrix(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __neg__(self) -> "Matrix":
        return Matrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "Matrix":
        return Matrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "Matrix":
        base = self if n >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(n)):
            out = out @ base
        return out

    def psl_key(self) -> Tuple[int, int, int, int]:
        """Representative of {g, -g}: first nonzero entry of (c, d) positive."""
        a, b, c, d = self.entries
        if c < 0 or (c == 0 and d < 0):
            return (-a, -b, -c, -d)
        return (a, b, c, d)

    def psl_equal(self, other: "Matrix") -> bool:
        return self.psl_key() == other.psl_key()

    def to_list(self):
        return [self.a, self.b, self.c, self.d]

    @classmethod
    def from_list(cls, xs: Sequence[int]) -> "Matrix":
        return cls(*xs)

    def __repr__(self) -> str:
        return f"Matrix([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


IDENTITY = Matrix(1, 0, 0, 1)
SIGMA = Matrix(0, -1, 1, 0)
TAU = Matrix(0, -1, 1, -1)
THETA = Matrix(1, 1, 0, 1)

# letters of the free product normal form
GENERATORS = {"s": SIGMA, "t": TAU, "t2": TAU @ TAU}


def act_cusp(g: Matrix, x) -> Cusp:
    """(a x + b) / (c x + d) on P^1(Q), exactly."""
    x = Cusp.of(x)
    a, b, c, d = g.entries
    if x.is_infinite:
        return Cusp(a, c)
    return Cusp(a * x.num + b * x.den, c * x.num + d * x.den)


def act_moebius(g: Matrix, z):
    """(a z + b) / (c z + d) for complex z (scalar or array)."""
    a, b, c, d = g.entries
    den = c * np.asarray(z) + d
    if np.any(den == 0):
        raise ZeroDivisionError(f"{g} has a pole at z = {-d}/{c}")
    out = (a * np.asarray(z) + b) / den
    return out if np.ndim(out) else complex(out)


def _append(word: list, letter: str) -> None:
    """Push a letter and cancel inside the cyclic factors."""
    if not word:
        word.append(letter)
        return
    last = word[-1]
    if letter == "s":
        if last == "s":
            word.pop()
        else:
            word.append("s")
        return
    # letter in {t, t2}: exponents add mod 3
    if last in ("t", "t2"):
        e = (1 if last == "t" else 2) + (1 if letter == "t" else 2)
        word.pop()
        if e % 3 == 1:
            word.append("t")
        elif e % 3 == 2:
            word.append("t2")
    else:
        word.append(letter)


def _theta_power_letters(n: int) -> list:
    # theta = t2 s and theta^{-1} = s t in PSL(2,Z)
    unit = ["t2", "s"] if n > 0 else ["s", "t"]
    return unit * abs(n)


def decompose(g: Matrix) -> Tuple[str, ...]:
    """Alternating word in 's', 't', 't2' equal to g in PSL(2,Z).

    Euclid on the first column writes g = theta^{n_1} s theta^{n_2} s ...,
    the letters theta^{+-1} are rewritten through sigma and tau and the
    result is freely reduced, which yields the unique normal form.
    """
    letters: list = []
    h = g
    while h.c != 0:
        if h.c < 0:
            h = -h
        n = h.a // h.c
        letters += _theta_power_letters(n)
        h = (THETA ** (-n)) @ h  # now 0 <= a < c
        letters.append("s")
        h = SIGMA.inverse() @ h
    # h = +-theta^b
    if h.d < 0:
        h = -h
    letters += _theta_power_letters(h.b)
    word: list = []
    for x in letters:
        _append(word, x)
    return tuple(word)


def recompose(word: Iterable[str]) -> Matrix:
    out = IDENTITY
    for x in word:
        out = out @ GENERATORS[x]
    return out


word_matrix = recompose


def random_word(rng: random.Random, length: int) -> Tuple[str, ...]:
    """A random alternating word with exactly ``length`` letters."""
    word = []
    for i in range(length):
        if word and word[-1] == "s":
            word.append(rng.choice(("t", "t2")))
        elif word:
            word.append("s")
        else:
            word.append(rng.choice(("s", "t", "t2")))
    return tuple(word)


def random_matrix(rng: random.Random, max_length: int = 6) -> Matrix:
    g = recompose(random_word(rng, rng.randint(0, max_length)))
    return -g if rng.random() < 0.5 else g


def reduce_to_fundamental_domain(z, max_iter: int = 10000):
    """Vectorized reduction: returns (w, a, b, c, d) with w = g z, Im w >= sqrt(3)/2.

    The integer arrays a, b, c, d give the reducing matrix g in SL(2,Z).
    """
    z = np.array(z, dtype=complex, ndmin=1)
    n = z.shape[0]
    a = np.ones(n, dtype=np.int64)
    b = np.zeros(n, dtype=np.int64)
    c = np.zeros(n, dtype=np.int64)
    d = np.ones(n, dtype=np.int64)
    w = z.copy()
    for _ in range(max_iter):
        shift = np.round(w.real).astype(np.int64)
        # translation by -shift: left-multiply by theta^{-shift}
        w = w - shift
        a, b = a - shift * c, b - shift * d
        inside = np.abs(w) < 1.0 - 1e-15
        if not inside.any():
            break
        # inversion by sigma on the points still inside the unit disc
        w = np.where(inside, -1.0 / np.where(inside, w, 1.0), w)
        a, b, c, d = (
            np.where(inside, -c, a),
            np.where(inside, -d, b),
            np.where(inside, a, c),
            np.where(inside, b, d),
        )
    else:
        raise RuntimeError("reduction to the fundamental domain did not terminate")
    return w, a, b, c, d


def cusp_float(x: Cusp) -> float:
    return x.num / x.den


def fraction_of(x) -> Fraction:
    return Cusp.of(x).to_fraction()
