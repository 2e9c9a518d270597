"""Truncated series in noncommuting variables A_1..A_l with leading term 1.

Words are tuples of 0-based letter indices; the word (0, 1) is A_1 A_2.
Coefficients are complex and stored sparsely.
"""
from __future__ import annotations

import itertools
import json
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

__all__ = [
    "NCSeries",
    "all_words",
    "word_str",
    "parse_word",
    "series_residual",
    "abs_product",
    "multiply",
    "invert",
    "diagonal_scale",
]

Word = Tuple[int, ...]


def all_words(nvars: int, depth: int) -> Iterator[Word]:
    for n in range(depth + 1):
        yield from itertools.product(range(nvars), repeat=n)


def word_str(word: Word) -> str:
    """(0, 1) -> 'A1A2'; the empty word is '1'."""
    return "".join(f"A{m + 1}" for m in word) or "1"


def parse_word(text: str) -> Word:
    text = text.strip()
    if text in ("", "1"):
        return ()
    parts = text.split("A")[1:]
    return tuple(int(p) - 1 for p in parts)


class NCSeries:
    """An element of the truncated group G_N of series with constant term 1."""

    __slots__ = ("nvars", "depth", "coeffs")

    def __init__(self, nvars: int, depth: int, coeffs: Mapping[Word, complex] = None):
        if nvars < 0 or depth < 0:
            raise ValueError("nvars and depth must be non-negative")
        self.nvars = nvars
        self.depth = depth
        self.coeffs: Dict[Word, complex] = {(): 1.0 + 0j}
        for word, c in (coeffs or {}).items():
            word = tuple(word)
            if len(word) > depth:
                continue
            if any(not 0 <= m < nvars for m in word):
                raise ValueError(f"letter out of range in {word}")
            self.coeffs[word] = complex(c)

    @classmethod
    def one(cls, nvars: int, depth: int) -> "NCSeries":
        return cls(nvars, depth)

    @classmethod
    def linear(cls, nvars: int, depth: int, values: Sequence[complex]) -> "NCSeries":
        """1 + sum_m values[m] A_m."""
        return cls(nvars, depth, {(m,): c for m, c in enumerate(values)})

    def __getitem__(self, word) -> complex:
        return self.coeffs.get(tuple(word), 0j)

    def words(self) -> Iterator[Word]:
        return all_words(self.nvars, self.depth)

    def _check(self, other: "NCSeries") -> None:
        if not isinstance(other, NCSeries):
            raise TypeError("expected an NCSeries")
        if (self.nvars, self.depth) != (other.nvars, other.depth):
            raise ValueError(
                f"shape mismatch: ({self.nvars}, {self.depth}) vs ({other.nvars}, {other.depth})"
            )

    def __mul__(self, other: "NCSeries") -> "NCSeries":
        self._check(other)
        out: Dict[Word, complex] = {}
        N = self.depth
        for u, cu in self.coeffs.items():
            if cu == 0:
                continue
            room = N - len(u)
            for v, cv in other.coeffs.items():
                if len(v) <= room:
                    w = u + v
                    out[w] = out.get(w, 0j) + cu * cv
        res = NCSeries(self.nvars, N)
        res.coeffs = out
        res.coeffs.setdefault((), 1.0 + 0j)
        return res

    def inverse(self) -> "NCSeries":
        """(1 + y)^{-1} = sum_{n <= N} (-y)^n, degree by degree."""
        if abs(self[()] - 1) > 1e-12:
            raise ValueError("only series with constant term 1 are invertible here")
        y = NCSeries(self.nvars, self.depth)
        y.coeffs = {w: -c for w, c in self.coeffs.items() if w}
        y.coeffs[()] = 0j
        out = NCSeries.one(self.nvars, self.depth)
        power: Dict[Word, complex] = {(): 1.0 + 0j}
        for _ in range(self.depth):
            power = _mul_raw(power, y, self.depth)
            for w, c in power.items():
                if w:
                    out.coeffs[w] = out.coeffs.get(w, 0j) + c
        return out

    def scale(self, chi: Sequence[complex]) -> "NCSeries":
        """The automorphism A_m -> chi_m^{-1} A_m."""
        if len(chi) != self.nvars:
            raise ValueError("character has the wrong length")
        inv = [1 / complex(c) for c in chi]
        out = NCSeries(self.nvars, self.depth)
        out.coeffs = {w: c * _prod(inv[m] for m in w) for w, c in self.coeffs.items()}
        return out

    def weight_scale(self, factors: Sequence[complex]) -> "NCSeries":
        """A_m -> factors[m] A_m (the inverse convention of :meth:`scale`)."""
        return self.scale([1 / complex(f) for f in factors])

    def truncate(self, depth: int) -> "NCSeries":
        return NCSeries(self.nvars, depth, {w: c for w, c in self.coeffs.items() if len(w) <= depth})

    def map_coefficients(self, fn) -> "NCSeries":
        """Apply fn(word, coefficient) to every non-empty word."""
        out = NCSeries(self.nvars, self.depth)
        out.coeffs = {w: (fn(w, c) if w else c) for w, c in self.coeffs.items()}
        return out

    def max_abs_diff(self, other: "NCSeries") -> float:
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self[w] - other[w]) for w in keys), default=0.0)

    def is_close(self, other: "NCSeries", tol: float = 1e-12) -> bool:
        return series_residual(self, other) <= tol

    def __eq__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        return (self.nvars, self.depth) == (other.nvars, other.depth) and self.max_abs_diff(other) == 0

    __hash__ = None

    def to_dict(self) -> dict:
        return {word_str(w): [c.real, c.imag] for w, c in sorted(self.coeffs.items(), key=_word_order)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping[str, Sequence[float]], nvars: int, depth: int) -> "NCSeries":
        return cls(nvars, depth, {parse_word(k): complex(v[0], v[1]) for k, v in data.items()})

    @classmethod
    def from_json(cls, text: str, nvars: int, depth: int) -> "NCSeries":
        return cls.from_dict(json.loads(text), nvars, depth)

    def __repr__(self) -> str:
        body = " + ".join(
            f"({c:.6g}){word_str(w)}" for w, c in sorted(self.coeffs.items(), key=_word_order) if w and c != 0
        )
        return f"NCSeries(1{' + ' + body if body else ''})"


def multiply(x: NCSeries, y: NCSeries) -> NCSeries:
    return x * y


def invert(x: NCSeries) -> NCSeries:
    return x.inverse()


def diagonal_scale(chi: Sequence[complex], x: NCSeries) -> NCSeries:
    """chi* x: A_m -> chi_m^{-1} A_m."""
    return x.scale(chi)


def _word_order(item):
    w = item[0]
    return (len(w), w)


def _prod(xs: Iterable[complex]) -> complex:
    out = 1 + 0j
    for x in xs:
        out *= x
    return out


def _mul_raw(xc: Dict[Word, complex], y: NCSeries, N: int) -> Dict[Word, complex]:
    out: Dict[Word, complex] = {}
    for u, cu in xc.items():
        if cu == 0:
            continue
        for v, cv in y.coeffs.items():
            if cv != 0 and len(u) + len(v) <= N:
                out[u + v] = out.get(u + v, 0j) + cu * cv
    return out


def abs_product(x: NCSeries, y: NCSeries) -> NCSeries:
    """Coefficients sum |x_u| |y_v| over splittings w = uv: the roundoff scale of x y."""
    ax = NCSeries(x.nvars, x.depth)
    ax.coeffs = {w: complex(abs(c)) for w, c in x.coeffs.items()}
    ay = NCSeries(y.nvars, y.depth)
    ay.coeffs = {w: complex(abs(c)) for w, c in y.coeffs.items()}
    return ax * ay


def series_residual(x: NCSeries, y: NCSeries, relative: bool = True, scale: NCSeries = None) -> float:
    """max_w |x_w - y_w|, scaled per degree.

    The default scale of degree n is max(1, largest |y_u| with |u| = n).  A
    ``scale`` series replaces it by the largest |scale_u| of that degree,
    e.g. :func:`abs_product` when y is a product with cancellation.  With
    ``relative=False`` the plain coefficientwise maximum is returned.
    """
    x._check(y)
    if not relative:
        return x.max_abs_diff(y)
    worst = 0.0
    for n in range(1, x.depth + 1):
        ws = [w for w in set(x.coeffs) | set(y.coeffs) if len(w) == n]
        if not ws:
            continue
        if scale is None:
            denom = max(1.0, max(abs(y[w]) for w in ws))
        else:
            denom = max([abs(scale[w]) for w in ws] + [abs(x[w]) for w in ws] + [abs(y[w]) for w in ws])
            denom = denom if denom > 0 else 1.0
        worst = max(worst, max(abs(x[w] - y[w]) for w in ws) / denom)
    return max(worst, abs(x[()] - y[()]))
