"""Multiplier systems of real weight for eta powers and the weight actions.

Conventions (all powers use the branch rules below):

* ``real_power(x, k, "upper")`` takes arg x in (-pi, pi], ``"lower"`` takes
  arg x in [-pi, pi).  They differ only on the negative real axis.
* The multiplier of ``eta^(2w)`` is the unit ``v(g)`` with
  ``F(g z) = v(g) (c z + d)^w F(z)``.  This gives
  ``v(sigma) = exp(-pi i w/2)`` and ``v(theta) = exp(pi i w/6)``.
* ``automorphy_factor(v, k, g, z) = v(g) (c z + d)^k`` and
  ``bare_factor(g, z) = c z + d``.

The weight action on functions on the upper half-plane is
``(F|g)(z) = automorphy_factor(g, z)^{-1} F(g z)``, the right action that
fixes every form with multiplier ``v``.  On the lower half-plane
``(P|g)(t) = v(g)^{-1} (c t + d)^k P(g t)``, with real t read as the limit
from below.  The second expression in the
printed version of that formula, ``j_{v,k}(g, t) P(g t)``, only agrees with
the first when ``j`` is read as the bare factor, so the bare reading is the
one implemented.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .exact import classical_dedekind_sum
from .modular import Matrix

__all__ = [
    "real_power",
    "EtaPowerMultiplier",
    "eta_power_multiplier",
    "eta_multiplier_phase",
    "bare_factor",
    "automorphy_factor",
    "lower_factor",
    "cocycle_residual",
    "weight_action",
    "slash_upper",
    "slash_lower",
]

Real = Union[float, Fraction, int]


def real_power(base, exponent, halfplane: str = "upper"):
    """base**exponent with the branch fixed by the half-plane convention.

    Works on scalars and arrays.  ``halfplane`` is ``"upper"`` (arg in
    (-pi, pi]) or ``"lower"`` (arg in [-pi, pi)).
    """
    base = np.asarray(base, dtype=complex)
    if np.any(base == 0):
        raise ZeroDivisionError("zero base in real_power")
    arg = np.angle(base)
    # np.angle returns values in [-pi, pi]; -0.0 imaginary parts give -pi
    on_axis = (base.imag == 0) & (base.real < 0)
    if halfplane == "upper":
        arg = np.where(on_axis, math.pi, arg)
    elif halfplane == "lower":
        arg = np.where(on_axis, -math.pi, arg)
    else:
        raise ValueError("halfplane must be 'upper' or 'lower'")
    k = float(exponent)
    out = np.exp(k * (np.log(np.abs(base)) + 1j * arg))
    return out if out.ndim else complex(out)


@lru_cache(maxsize=None)
def eta_multiplier_phase(a: int, b: int, c: int, d: int) -> Fraction:
    """Exact phase/(pi) for eta^2, i.e. v(g) = exp(pi i w * phase) for eta^(2w).

    c > 0:   (a + d)/(6c) - 2 s(d, c) - 1/2
    c = 0:   b/6 (d = 1) or -b/6 - 1 (d = -1)
    c < 0:   phase(-g) + 1
    The result is reduced to [0, 2) only when w is an integer; here it is
    returned unreduced so that any real w can use it.
    """
    if c > 0:
        return Fraction(a + d, 6 * c) - 2 * classical_dedekind_sum(d, c) - Fraction(1, 2)
    if c == 0:
        if d == 1:
            return Fraction(b, 6)
        return Fraction(-b, 6) - 1
    return eta_multiplier_phase(-a, -b, -c, -d) + 1


def _phase_to_unit(w: Real, phase: Fraction) -> complex:
    if isinstance(w, (int, Fraction)):
        # exact reduction of the exponent modulo 2 keeps roots of unity clean
        x = (Fraction(w) * phase) % 2
        return cmath.exp(1j * math.pi * float(x))
    x = math.fmod(float(w) * float(phase), 2.0)
    return cmath.exp(1j * math.pi * x)


@dataclass(frozen=True)
class EtaPowerMultiplier:
    """Multiplier system of eta^(2w), of weight w."""

    w: Real

    family = "eta_power"

    @property
    def weight(self) -> float:
        return float(self.w)

    def __call__(self, g: Matrix) -> complex:
        return _phase_to_unit(self.w, eta_multiplier_phase(*g.entries))

    def values(self, a, b, c, d) -> np.ndarray:
        """Vectorized evaluation over integer arrays of matrix entries."""
        out = np.empty(np.shape(a), dtype=complex)
        for idx, entries in enumerate(zip(np.ravel(a), np.ravel(b), np.ravel(c), np.ravel(d))):
            out.flat[idx] = _phase_to_unit(self.w, eta_multiplier_phase(*map(int, entries)))
        return out


def eta_power_multiplier(w: Real, g: Matrix) -> complex:
    return EtaPowerMultiplier(w)(g)


def bare_factor(g: Matrix, z):
    return g.c * np.asarray(z) + g.d


def automorphy_factor(v: Callable[[Matrix], complex], k: Real, g: Matrix, z, halfplane="upper"):
    """j_{v,k}(g, z) = v(g) (c z + d)^k."""
    return v(g) * real_power(bare_factor(g, z), k, halfplane)


def cocycle_residual(v, k: Real, g: Matrix, h: Matrix, z: complex) -> float:
    """|j(gh, z) - j(g, h z) j(h, z)| / |j(gh, z)|.

    Relative, since |c z + d|^k grows quickly with the matrix entries.
    """
    hz = (h.a * z + h.b) / (h.c * z + h.d)
    lhs = automorphy_factor(v, k, g @ h, z)
    rhs = automorphy_factor(v, k, g, hz) * automorphy_factor(v, k, h, z)
    return float(abs(lhs - rhs) / abs(lhs))


def lower_factor(g: Matrix, t, k: Real):
    """(c t + d)^k for t in the closed lower half-plane.

    For real t this is the boundary value from below, c (t - i0) + d, which
    lies just above the negative axis when c < 0 and just below when c > 0.
    For c = 0 the factor is the constant d^k with arg d in [-pi, pi).
    """
    base = bare_factor(g, t)
    return real_power(base, k, "upper" if g.c < 0 else "lower")


def slash_upper(F: Callable, v, k: Real, g: Matrix) -> Callable:
    """(F|g)(z) = j_{v,k}(g, z)^{-1} F(g z) on the upper half-plane."""

    def G(z):
        z = np.asarray(z, dtype=complex)
        gz = (g.a * z + g.b) / (g.c * z + g.d)
        return F(gz) / automorphy_factor(v, k, g, z, "upper")

    return G


def slash_lower(P: Callable, v, k: Real, g: Matrix) -> Callable:
    """(P|g)(t) = v(g)^{-1} (c t + d)^k P(g t) on the lower half-plane.

    Real t are treated as limits from below; see :func:`lower_factor`.
    """

    def Q(t):
        t = np.asarray(t, dtype=complex)
        gt = (g.a * t + g.b) / (g.c * t + g.d)
        return lower_factor(g, t, k) * P(gt) / v(g)

    return Q


def weight_action(F: Callable, v, k: Real, g: Matrix, direction: str = "plus") -> Callable:
    """Right action of g on functions: ``plus`` on H+, ``minus`` on H-."""
    if direction == "plus":
        return slash_upper(F, v, k, g)
    if direction == "minus":
        return slash_lower(F, v, k, g)
    raise ValueError("direction must be 'plus' or 'minus'")
