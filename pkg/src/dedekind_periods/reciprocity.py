"""Reciprocity functions built from generating series of iterated periods.

For coprime p > 0, q >= 0 the value f(p, q) is J_0^{i inf}(Omega; q/p) with
the coefficient of A_{m_1} ... A_{m_n} multiplied by p^(k_{m_1} + ... + k_{m_n}).
Pairs with q < 0 are reached through f(p, q) = (v(sigma)* f(-q, p))^{-1},
where v(g)* sends A_m to v_m(g)^{-1} A_m.

The first-order coefficients are the scalar functions

    f_0j(p, q) = p^(k_j) I_0^{i inf}(omega_j; q/p)

and the three-term relation between them is checked through each of its
intermediate steps with single quadratures, independently of the transport.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exact import INF, Cusp, normalize
from .iterated import FormFamily, TRANSPORT_TOL, transport
from .modular import SIGMA, THETA, Matrix
from .multipliers import lower_factor
from .ncseries import NCSeries, abs_product, series_residual
from .quadrature import DEFAULT_TOL, period_integral
from .report import Check

__all__ = [
    "ReciprocityValue",
    "ScalarReciprocity",
    "f_direct",
    "f_extended",
    "f_value",
    "f_scalar",
    "f_scalar_boundary",
    "residual_eq_3_1",
    "residual_eq_3_8",
    "three_term_steps",
    "sigma_scalar_residual",
    "double_extension_residual",
    "inverse_path_residual",
    "grid_pairs",
    "THETA_SIGMA_THETA",
]

THETA_SIGMA_THETA = THETA @ SIGMA @ THETA  # [[1, 0], [1, 1]]
ZERO = Cusp(0, 1)


@dataclass(frozen=True)
class ReciprocityValue:
    p: int
    q: int
    value: NCSeries
    provenance: str  # "direct" or "extended"
    degenerate: bool = False  # q = 0: t = 0 is an endpoint of the path

    def __getitem__(self, word) -> complex:
        return self.value[tuple(word)]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "provenance": self.provenance,
            "degenerate": self.degenerate,
            "series": self.value.to_dict(),
        }


@dataclass(frozen=True)
class ScalarReciprocity:
    j: int
    p: int
    q: int
    value: complex
    error: float


def _check_pair(p: int, q: int) -> None:
    normalize(p, q)  # raises on non-coprime input
    if p <= 0:
        raise ValueError("p must be positive")


@lru_cache(maxsize=4096)
def _direct_series(family: FormFamily, p: int, q: int, depth: int, tol: float) -> NCSeries:
    J = transport(family, ZERO, INF, q / p, depth, tol=tol, allow_endpoint_t=(q == 0))
    factors = [float(p) ** F.k for F in family.forms]
    return J.series.weight_scale(factors)


def f_direct(family: FormFamily, p: int, q: int, depth: int, tol: float = TRANSPORT_TOL) -> ReciprocityValue:
    """f(p, q) for coprime p > 0, q >= 0; q = 0 is computed but flagged."""
    _check_pair(p, q)
    if q < 0:
        raise ValueError("f_direct needs q >= 0; use f_extended for q < 0")
    series = _direct_series(family, p, q, depth, tol)
    return ReciprocityValue(p, q, series, "direct", degenerate=(q == 0))


def f_extended(
    family: FormFamily, p: int, q: int, depth: int, tol: float = TRANSPORT_TOL, convention: str = "literal"
) -> ReciprocityValue:
    """f(p, q) for p > 0 > q from the value at (-q, p).

    ``literal``:  (v(sigma)* f(-q, p))^{-1}
    ``boundary``: (v(sigma)^{-1}* f(-q, p))^{-1}, which is what the
    integral definition gives when t = q/p < 0 is read as a limit from the
    lower half-plane.  The two agree when every v_m(sigma)^2 = 1.
    """
    _check_pair(p, q)
    if q >= 0:
        raise ValueError("f_extended needs q < 0")
    base = f_direct(family, -q, p, depth, tol).value
    chi = family.character(SIGMA)
    if convention == "literal":
        scaled = base.scale(chi)
    elif convention == "boundary":
        scaled = base.scale([1 / c for c in chi])
    else:
        raise ValueError("convention must be 'literal' or 'boundary'")
    return ReciprocityValue(p, q, scaled.inverse(), "extended")


def f_value(family: FormFamily, p: int, q: int, depth: int, tol: float = TRANSPORT_TOL, convention: str = "literal") -> ReciprocityValue:
    """f on all pairs with p != 0, using f(-p, -q) = f(p, q)."""
    normalize(p, q)
    if p == 0:
        raise ValueError("p = 0 is not covered by the integral definition")
    if p < 0:
        p, q = -p, -q
    if q >= 0:
        return f_direct(family, p, q, depth, tol)
    return f_extended(family, p, q, depth, tol, convention)


# -- the three-term relation -------------------------------------------------


def residual_eq_3_1(family: FormFamily, p: int, q: int, depth: int, tol: float = TRANSPORT_TOL, relative: bool = True) -> float:
    """f(p, q) against (v(theta)* f(p, q + p)) (v(theta sigma theta)* f(q + p, q))."""
    _check_pair(p, q)
    if q <= 0:
        raise ValueError("the three-term relation is checked for p, q > 0")
    lhs = f_direct(family, p, q, depth, tol).value
    a = f_direct(family, p, q + p, depth, tol).value.scale(family.character(THETA))
    b = f_direct(family, q + p, q, depth, tol).value.scale(family.character(THETA_SIGMA_THETA))
    if not relative:
        return series_residual(lhs, a * b, relative=False)
    # the product cancels heavily when p^k and (p + q)^k differ a lot, so
    # differences are measured against sum |a_u| |b_v|
    return series_residual(lhs, a * b, scale=abs_product(a, b))


def f_scalar(family: FormFamily, j: int, p: int, q: int, tol: float = DEFAULT_TOL) -> ScalarReciprocity:
    """f_0j(p, q) = p^(k_j) I_0^{i inf}(omega_j; q/p) by a single quadrature, p > 0, q > 0."""
    _check_pair(p, q)
    if q <= 0:
        raise ValueError("f_scalar needs q > 0")
    F = family.forms[j]
    r = period_integral(F, ZERO, INF, q / p, tol)
    scale = float(p) ** F.k
    return ScalarReciprocity(j, p, q, scale * r.value, scale * r.error)


def f_scalar_boundary(family: FormFamily, j: int, p: int, q: int, tol: float = DEFAULT_TOL) -> complex:
    """p^(k_j) I_0^{i inf}(omega_j; q/p) for any q with p > 0, t = q/p on the real line."""
    _check_pair(p, q)
    F = family.forms[j]
    if q == 0:
        raise ValueError("t = 0 is an endpoint of the path")
    return float(p) ** F.k * period_integral(F, ZERO, INF, q / p, tol).value


def _rel(lhs: complex, *terms: complex) -> float:
    """|lhs - sum(terms)| relative to the largest term involved."""
    scale = max([abs(lhs)] + [abs(x) for x in terms] + [1e-300])
    return abs(lhs - sum(terms)) / scale


def three_term_steps(family: FormFamily, j: int, p: int, q: int, tol: float = DEFAULT_TOL) -> Dict[str, float]:
    """Relative residuals of each step leading to the scalar three-term relation.

    t = q/p; every integral is a separate single quadrature.

    * ``split``:     I_0^inf(t) = I_{-1}^inf(t) + I_0^{-1}(t)
    * ``theta``:     I_{-1}^inf(t) = v(theta)^{-1} I_0^inf(t + 1)
    * ``tst``:       I_0^{-1}(t) = v(tst)^{-1} (t + 1)^k I_0^inf(t / (t + 1)),
      tst = theta sigma theta = [[1, 0], [1, 1]]
    * ``combined``:  I_0^inf(t) = v(theta)^{-1} I_0^inf(t + 1) + v(tst)^{-1} (t + 1)^k I_0^inf(t / (t + 1))
    * ``rational``:  the same with t + 1 = (q + p)/p and t/(t + 1) = q/(q + p)
    * ``scaled``:    p^k times ``rational``, i.e. the f_0j form
    """
    _check_pair(p, q)
    F = family.forms[j]
    k = F.k
    t = q / p
    m1 = Cusp(-1, 1)
    vt = F.multiplier(THETA)
    vtst = F.multiplier(THETA_SIGMA_THETA)

    def I(a, b, s):
        return period_integral(F, a, b, s, tol).value

    full = I(ZERO, INF, t)
    left = I(m1, INF, t)
    right = I(ZERO, m1, t)
    shifted = I(ZERO, INF, t + 1)
    folded = I(ZERO, INF, t / (t + 1))
    fac = lower_factor(THETA_SIGMA_THETA, t, k)
    out = {
        "split": _rel(full, left, right),
        "theta": _rel(left, shifted / vt),
        "tst": _rel(right, fac * folded / vtst),
        "combined": _rel(full, shifted / vt, fac * folded / vtst),
    }
    rat_shift = I(ZERO, INF, (q + p) / p)
    rat_fold = I(ZERO, INF, q / (q + p))
    rat_fac = ((q + p) / p) ** k
    out["rational"] = _rel(full, rat_shift / vt, rat_fac * rat_fold / vtst)
    lhs = float(p) ** k * full
    out["scaled"] = _rel(lhs, float(p) ** k * rat_shift / vt, float(q + p) ** k * rat_fold / vtst)
    return out


def residual_eq_3_8(family: FormFamily, j: int, p: int, q: int, tol: float = DEFAULT_TOL) -> float:
    """Scalar three-term relation f_0j(p,q) = v(theta)^{-1} f_0j(p,q+p) + v(tst)^{-1} f_0j(q+p,q)."""
    _check_pair(p, q)
    if q <= 0:
        raise ValueError("needs p, q > 0")
    F = family.forms[j]
    lhs = f_scalar(family, j, p, q, tol).value
    a = f_scalar(family, j, p, q + p, tol).value / F.multiplier(THETA)
    b = f_scalar(family, j, q + p, q, tol).value / F.multiplier(THETA_SIGMA_THETA)
    return _rel(lhs, a, b)


def sigma_scalar_residual(family: FormFamily, j: int, p: int, q: int, tol: float = DEFAULT_TOL) -> float:
    """f_0j(p, q) + v(sigma) f_0j(-q, p) for p > 0 > q, f_0j(p, q) read as the boundary integral."""
    _check_pair(p, q)
    if q >= 0:
        raise ValueError("needs q < 0")
    F = family.forms[j]
    ra = period_integral(F, ZERO, INF, q / p, tol)
    rb = period_integral(F, ZERO, INF, p / -q, tol)
    a = float(p) ** F.k * ra.value
    b = F.multiplier(SIGMA) * float(-q) ** F.k * rb.value
    # both sides vanish at some pairs; the integrand mass sets the scale then
    floor = max(float(p) ** F.k * ra.mass, float(-q) ** F.k * rb.mass) * 1e-3
    return abs(a + b) / max(abs(a), abs(b), floor, 1e-300)


def double_extension_residual(family: FormFamily, p: int, q: int, depth: int, tol: float = TRANSPORT_TOL) -> float:
    """Apply the extension rule to the extended value once more.

    (v(sigma)* f_ext(p, q))^{-1} must equal v(sigma)^2* f(-q, p).
    """
    ext = f_extended(family, p, q, depth, tol).value
    chi = family.character(SIGMA)
    again = ext.scale(chi).inverse()
    expected = f_direct(family, -q, p, depth, tol).value.scale([c * c for c in chi])
    return series_residual(again, expected)


def inverse_path_residual(family: FormFamily, t, depth: int, tol: float = TRANSPORT_TOL) -> float:
    """J_0^inf(t) J_inf^0(t) = 1 with both factors transported separately."""
    a = transport(family, ZERO, INF, t, depth, tol=tol)
    b = transport(family, INF, ZERO, t, depth, tol=tol)
    one = NCSeries.one(family.size, depth)
    return series_residual(a.series * b.series, one)


def grid_pairs(bound: int, positive: bool = True) -> List[Tuple[int, int]]:
    """Coprime pairs 1 <= p, q <= bound."""
    return [(p, q) for p in range(1, bound + 1) for q in range(1, bound + 1) if math.gcd(p, q) == 1]


# -- report helpers ------------------------------------------------------------


def scalar_three_term_checks(family: FormFamily, bound: int = 5, tol: float = 1e-7) -> List[Check]:
    out = []
    for j, F in enumerate(family.forms):
        for p, q in grid_pairs(bound):
            r = residual_eq_3_8(family, j, p, q)
            out.append(Check(f"scalar3/w={F.w}/p={p},q={q}", "scalar three-term", {"w": str(F.w), "p": p, "q": q}, r, tol))
    return out


def series_three_term_checks(
    family: FormFamily, pairs: Iterable[Tuple[int, int]], depth: int, tol: float = 1e-6
) -> List[Check]:
    out = []
    label = "+".join(str(F.w) for F in family.forms)
    for p, q in pairs:
        r = residual_eq_3_1(family, p, q, depth)
        out.append(
            Check(f"series3/{label}/N={depth}/p={p},q={q}", "series three-term", {"family": label, "p": p, "q": q, "depth": depth}, r, tol)
        )
    return out


def residual_records(checks: Iterable[Check]) -> List[dict]:
    """The flat {p, q, depth, equation, residual, tolerance, pass} rows."""
    rows = []
    for c in checks:
        rows.append(
            {
                "p": c.inputs.get("p"),
                "q": c.inputs.get("q"),
                "depth": c.inputs.get("depth", 1),
                "equation": c.equation,
                "residual": c.residual,
                "tolerance": c.tolerance,
                "pass": c.passed,
            }
        )
    return rows
