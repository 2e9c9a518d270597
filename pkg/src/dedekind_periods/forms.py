"""Cusp forms eta(z)^(2w) of real weight w as q-expansions.

    eta^(2w)(z) = q^(w/12) * prod_{n>=1} (1 - q^n)^(2w),   q = exp(2 pi i z)

The product coefficients b_m come from the logarithmic-derivative
recurrence ``m b_m = -2w sum_{j=1}^m sigma_1(j) b_{m-j}``.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .modular import SIGMA, Matrix, reduce_to_fundamental_domain
from .multipliers import EtaPowerMultiplier, real_power

__all__ = [
    "CuspForm",
    "QExpansion",
    "eta_power",
    "eta_power_coefficients",
    "divisor_sigma",
    "TailBoundError",
    "BUILTIN_WEIGHTS",
    "builtin_forms",
]

BUILTIN_WEIGHTS = (Fraction(1, 2), Fraction(53, 10), Fraction(53, 5), 12)
DEFAULT_M = 256


class TailBoundError(ValueError):
    """Raised when the truncated q-series cannot meet the requested tolerance."""


@lru_cache(maxsize=None)
def divisor_sigma(n: int) -> int:
    total = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            total += d if d * d == n else d + n // d
    return total


def eta_power_coefficients(w, M: int, exact: bool = False):
    """Coefficients b_0..b_M of prod (1 - q^n)^(2w).

    With ``exact=True`` and rational w the result is a list of Fractions
    (ints when 2w is an integer); otherwise a float64 array.
    """
    sig = [0] + [divisor_sigma(j) for j in range(1, M + 1)]
    if exact:
        s = 2 * Fraction(w)
        b = [Fraction(1)]
        for m in range(1, M + 1):
            acc = sum(sig[j] * b[m - j] for j in range(1, m + 1))
            b.append(-s * acc / m)
        if s.denominator == 1:
            return [int(x) for x in b]
        return b
    s = 2.0 * float(w)
    sig = np.array(sig, dtype=float)
    b = np.zeros(M + 1)
    b[0] = 1.0
    for m in range(1, M + 1):
        b[m] = -s * np.dot(sig[1 : m + 1], b[m - 1 :: -1][:m]) / m
    return b


def _majorant(w, M: int) -> np.ndarray:
    """Coefficients of prod (1 - q^n)^(-2w); they dominate |b_m| termwise."""
    return eta_power_coefficients(-float(w), M)


@dataclass(frozen=True)
class QExpansion:
    alpha: float
    coefficients: np.ndarray = field(repr=False)

    @property
    def M(self) -> int:
        return len(self.coefficients) - 1


@dataclass(frozen=True, eq=False)
class CuspForm:
    """eta^(2w): weight w, multiplier of eta^(2w), leading exponent w/12."""

    w: Union[float, Fraction, int]
    M: int = DEFAULT_M
    expansion: QExpansion = field(init=False, repr=False)
    multiplier: EtaPowerMultiplier = field(init=False, repr=False)
    _majorant: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if float(self.w) <= 0:
            raise ValueError("weight must be positive")
        if self.M < 1:
            raise ValueError("truncation M must be >= 1")
        coeffs = eta_power_coefficients(self.w, self.M)
        object.__setattr__(self, "expansion", QExpansion(float(self.w) / 12.0, coeffs))
        object.__setattr__(self, "multiplier", EtaPowerMultiplier(self.w))
        object.__setattr__(self, "_majorant", _majorant(self.w, self.M + 1))

    family = "eta_power"

    @property
    def weight(self) -> float:
        return float(self.w)

    @property
    def k(self) -> float:
        """Weight minus two: the exponent in F(z)(z - t)^k dz."""
        return float(self.w) - 2.0

    @property
    def alpha(self) -> float:
        return self.expansion.alpha

    @property
    def coefficients(self) -> np.ndarray:
        return self.expansion.coefficients

    # -- identity -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "w": str(self.w) if isinstance(self.w, Fraction) else self.w,
            "alpha": self.alpha,
            "weight": self.weight,
            "coefficients": [float(x) for x in self.coefficients],
            "M": self.M,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CuspForm":
        if data.get("family") != "eta_power":
            raise ValueError(f"unknown form family {data.get('family')!r}")
        w = data["w"]
        w = Fraction(w) if isinstance(w, str) else w
        form = cls(w, int(data["M"]))
        stored = np.asarray(data.get("coefficients", form.coefficients), dtype=float)
        if stored.shape != form.coefficients.shape or not np.allclose(
            stored, form.coefficients, rtol=1e-12, atol=0
        ):
            raise ValueError("stored coefficients do not match the eta-power recurrence")
        return form

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CuspForm":
        return cls.from_dict(json.loads(text))

    def content_hash(self) -> str:
        key = json.dumps({"family": self.family, "w": str(self.w), "M": self.M})
        return hashlib.sha256(key.encode()).hexdigest()[:16]

    def __eq__(self, other):
        return isinstance(other, CuspForm) and (self.w, self.M) == (other.w, other.M)

    def __hash__(self):
        return hash((self.family, Fraction(self.w) if not isinstance(self.w, float) else self.w, self.M))

    def __repr__(self):
        return f"CuspForm(eta^{2 * self.w}, weight={self.w}, M={self.M})"

    # -- evaluation -----------------------------------------------------
    def tail_bound(self, y, n_terms: Optional[int] = None):
        """Bound on |sum_{m >= n_terms} b_m q^(alpha+m)| at Im z = y.

        Uses the majorant coefficients c_m >= |b_m| and geometric domination
        of the remaining terms by their current ratio.
        """
        n = self.M + 1 if n_terms is None else n_terms
        y = np.asarray(y, dtype=float)
        r = np.exp(-2 * math.pi * y)
        c = self._majorant
        if n >= len(c):
            n = len(c) - 1
        rho = c[n] / c[n - 1] if n >= 1 else 1.0
        ratio = rho * r
        with np.errstate(over="ignore", divide="ignore"):
            bound = np.where(
                ratio < 1, c[n] * r ** (n + self.alpha) / np.maximum(1 - ratio, 1e-300), np.inf
            )
        return bound

    def _terms_needed(self, y_min: float, tol: float = 1e-17) -> int:
        r = math.exp(-2 * math.pi * y_min)
        c = self._majorant
        for n in range(1, self.M + 1):
            if c[n] * r**n < tol * 1e-3:
                return n
        return self.M + 1

    def _series(self, z: np.ndarray, n_terms: int) -> np.ndarray:
        q = np.exp(2j * math.pi * z)
        acc = np.zeros_like(z)
        for coef in self.coefficients[:n_terms][::-1]:
            acc = acc * q + coef
        return acc * np.exp(2j * math.pi * self.alpha * z)

    def evaluate(self, z, tol: float = 1e-13, return_bound: bool = False):
        """Direct truncated q-series; raises TailBoundError if M is too small.

        The tolerance is relative to the size of the leading term.
        """
        z = np.asarray(z, dtype=complex)
        if np.any(z.imag <= 0):
            raise ValueError("evaluate needs Im z > 0")
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        vals = self._series(z, self.M + 1)
        bound = self.tail_bound(z.imag)
        scale = np.abs(np.exp(2j * math.pi * self.alpha * z))
        if np.any(bound > tol * np.maximum(scale, 1e-300)):
            raise TailBoundError(
                f"truncation M={self.M} too small at Im z = {z.imag.min():.3g}"
            )
        if scalar:
            vals, bound = complex(vals[0]), float(bound[0])
        return (vals, bound) if return_bound else vals

    def __call__(self, z):
        """F(z) anywhere on H+, via reduction to the fundamental domain.

        F(z) = F(g z) / (v(g) (c z + d)^w) for the reducing matrix g.
        """
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        if np.any(z.imag <= 0):
            raise ValueError("F is defined on Im z > 0 only")
        w_red, a, b, c, d = reduce_to_fundamental_domain(z)
        n = self._terms_needed(float(w_red.imag.min()))
        vals = self._series(w_red, n)
        moved = (c != 0) | (d != 1) | (b != 0)
        if moved.any():
            idx = np.nonzero(moved)[0]
            mult = self.multiplier.values(a[idx], b[idx], c[idx], d[idx])
            factor = mult * real_power(c[idx] * z[idx] + d[idx], self.w, "upper")
            vals[idx] = vals[idx] / factor
        return complex(vals[0]) if scalar else vals

    def evaluate_at_cusp(self, cusp, delta):
        """F(a + delta) for a finite cusp a = p/q, without forming a + delta.

        With g = [[x, y], [q, -p]] sending a to infinity,
        g(a + delta) = x/q - 1/(q^2 delta) and c z + d = q delta, so only the
        offset delta enters and no digits are lost near the cusp.
        """
        p, q = cusp.num, cusp.den
        if q == 0:
            raise ValueError("the cusp at infinity needs no offset form")
        x = (-pow(p, -1, q)) % q if q > 1 else 0
        y = (-x * p - 1) // q
        g = Matrix(x, y, q, -p)
        delta = np.asarray(delta, dtype=complex)
        gz = x / q - 1.0 / (q * q * delta)
        return self(gz) / (self.multiplier(g) * real_power(q * delta, self.w, "upper"))

    def evaluate_near_zero(self, z):
        """F(z) = j(sigma, z)^{-1} F(sigma z), then the direct series at -1/z."""
        z = np.asarray(z, dtype=complex)
        sz = -1.0 / z
        return self.evaluate(sz) / (self.multiplier(SIGMA) * real_power(z, self.w, "upper"))


def eta_power(w, M: int = DEFAULT_M) -> CuspForm:
    """The cusp form eta^(2w) of weight w."""
    return CuspForm(w, M)


def builtin_forms(M: int = DEFAULT_M):
    return {str(w): eta_power(w, M) for w in BUILTIN_WEIGHTS}
