"""Iterated period integrals and their generating series J_a^b(Omega; t).

The coefficient of A_{m_1} ... A_{m_n} is

    int_a^b omega_{m_1}(z_1) int_a^{z_1} omega_{m_2}(z_2) ... int_a^{z_{n-1}} omega_{m_n}(z_n),

so the series solves dJ = Omega J with J(a) = 1: the newest letter enters on
the left, and along a broken path J_a^b = J_c^b J_a^c.

The transport runs over Gauss-Legendre panels in the geodesic parameter.  On
each panel every nested integral is a polynomial collocation
``I_{m w}(x) = int g_m I_w`` evaluated with the cumulative integration
matrix, so one sweep yields all words up to the depth.  Panels are split
until the trailing Legendre coefficients of every integrand are negligible.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .exact import Cusp
from .forms import CuspForm
from .modular import Matrix, act_cusp, act_moebius
from .multipliers import lower_factor
from .ncseries import NCSeries, Word, all_words, word_str
from .quadrature import (
    GeodesicPath,
    QuadratureError,
    as_endpoint,
    find_cutoffs,
    panel_rule,
    path_integrands,
)

__all__ = [
    "FormFamily",
    "GeneratingSeriesValue",
    "transport",
    "compose",
    "gamma_action",
    "shuffle_residual",
    "shuffles",
    "nested_quadrature",
    "TRANSPORT_TOL",
]

TRANSPORT_TOL = 1e-13
PANEL_NODES = 24
MAX_PANELS = 5000


@dataclass(frozen=True)
class FormFamily:
    """An ordered family (F_1, ..., F_l) of cusp forms."""

    forms: Tuple[CuspForm, ...]

    def __post_init__(self):
        forms = tuple(self.forms)
        if len(forms) > 4:
            raise ValueError("a family holds at most 4 forms")
        object.__setattr__(self, "forms", forms)

    @property
    def size(self) -> int:
        return len(self.forms)

    @property
    def ks(self) -> Tuple[float, ...]:
        return tuple(F.k for F in self.forms)

    def bold_k(self, word: Word) -> float:
        return sum(self.forms[m].k for m in word)

    def bold_v(self, word: Word, g: Matrix) -> complex:
        out = 1 + 0j
        for m in word:
            out *= self.forms[m].multiplier(g)
        return out

    def character(self, g: Matrix) -> List[complex]:
        """(v_1(g), ..., v_l(g))."""
        return [F.multiplier(g) for F in self.forms]

    def key(self) -> str:
        return ",".join(F.content_hash() for F in self.forms)

    def integrands(self, path: GeodesicPath, t: complex):
        """s -> array of shape (l, len(s)) with F_m(z) (z - t)^k_m dz/ds."""

        return path_integrands(self.forms, path, t)


@dataclass(frozen=True)
class GeneratingSeriesValue:
    """J_a^b(Omega; t) truncated at the series depth."""

    family: FormFamily
    a: object
    b: object
    t: complex
    series: NCSeries
    error: float = 0.0  # estimated relative error of the coefficients

    @property
    def depth(self) -> int:
        return self.series.depth

    def __getitem__(self, word) -> complex:
        return self.series[tuple(word)]

    def to_dict(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "t": [self.t.real, self.t.imag],
            "depth": self.depth,
            "family": [str(F.w) for F in self.family.forms],
            "error": self.error,
            "series": self.series.to_dict(),
        }


def _same_endpoint(x, y) -> bool:
    if isinstance(x, Cusp) or isinstance(y, Cusp):
        return isinstance(x, Cusp) and isinstance(y, Cusp) and x == y
    return abs(complex(x) - complex(y)) <= 1e-12 * max(1.0, abs(complex(x)))


def _panel_series(G: np.ndarray, h: float, depth: int, rule) -> Dict[Word, complex]:
    """All iterated integrals over one panel from the integrand samples G (l x n)."""
    half = h / 2
    l = G.shape[0]
    ones = np.ones(G.shape[1], dtype=complex)
    running: Dict[Word, np.ndarray] = {(): ones}
    out: Dict[Word, complex] = {(): 1.0 + 0j}
    for n in range(1, depth + 1):
        nxt: Dict[Word, np.ndarray] = {}
        for rest, vals in running.items():
            for m in range(l):
                prod = G[m] * vals
                word = (m,) + rest
                out[word] = half * np.dot(rule.weights, prod)
                if n < depth:
                    nxt[word] = half * (rule.cumulative @ prod)
        running = nxt
    return out


def _cut_interval(family: FormFamily, path: GeodesicPath, t: complex):
    g = family.integrands(path, t)
    starts, ends = [], []
    for m in range(family.size):
        s0, s1 = find_cutoffs(path, lambda s, m=m: np.abs(g(s)[m]))
        starts.append(s0)
        ends.append(s1)
    if starts[0] <= ends[0]:
        return min(starts), max(ends)
    return max(starts), min(ends)


def transport(
    family: FormFamily,
    a,
    b,
    t,
    depth: int,
    tol: float = TRANSPORT_TOL,
    nodes: int = PANEL_NODES,
    allow_endpoint_t: bool = False,
) -> GeneratingSeriesValue:
    """J_a^b(Omega; t) along the geodesic from a to b, up to the given depth.

    A real t equal to a finite cusp endpoint is refused unless
    ``allow_endpoint_t`` is set; the integrals still converge there because
    the forms decay at every cusp.
    """
    t = complex(t)
    if t.imag > 0:
        raise ValueError("t must lie in the closed lower half-plane")
    path = a if isinstance(a, GeodesicPath) else GeodesicPath(a, b)
    a, b = path.a, path.b
    if not allow_endpoint_t:
        for end in (a, b):
            if isinstance(end, Cusp) and not end.is_infinite and t.imag == 0 and float(end.to_fraction()) == t.real:
                raise ValueError("t coincides with a path endpoint")
    if path.is_empty or depth == 0 or family.size == 0:
        return GeneratingSeriesValue(family, a, b, t, NCSeries.one(family.size, depth))
    g = family.integrands(path, t)
    s0, s1 = _cut_interval(family, path, t)
    rule = panel_rule(nodes)
    n_init = max(1, int(math.ceil(abs(s1 - s0))))
    edges = np.linspace(s0, s1, n_init + 1)
    pending = [(edges[i], edges[i + 1]) for i in range(n_init)][::-1]
    accepted = []
    scale = np.zeros(family.size)
    # first pass fixes the per-form scale used by the acceptance test
    samples = g(np.linspace(s0, s1, 16 * n_init + 1))
    scale = np.maximum(scale, np.abs(samples).max(axis=1))
    scale = np.where(scale > 0, scale, 1.0)
    err = np.zeros(family.size)
    mass = np.zeros(family.size)
    while pending:
        lo, hi = pending.pop()
        h = hi - lo
        xs = (lo + hi) / 2 + h / 2 * rule.nodes
        G = g(xs)
        coefs = G @ rule.to_legendre.T
        tail = np.abs(coefs[:, -3:]).max(axis=1)
        if np.all(tail <= tol * scale):
            accepted.append((h, G))
            err += abs(h) * tail
            mass += abs(h) / 2 * (np.abs(G) @ rule.weights)
            continue
        if abs(h) < 1e-9 or len(accepted) + len(pending) > MAX_PANELS:
            raise QuadratureError("step-size underflow: tolerance unreachable on this path")
        mid = (lo + hi) / 2
        pending.append((mid, hi))
        pending.append((lo, mid))
    total = NCSeries.one(family.size, depth)
    for h, G in accepted:
        panel = NCSeries(family.size, depth)
        panel.coeffs = _panel_series(G, h, depth, rule)
        total = panel * total
    # relative error per integrand, compounded once per nesting level
    error = depth * float(np.max(err / np.where(mass > 0, mass, 1.0)))
    return GeneratingSeriesValue(family, a, b, t, total, error)


def compose(left: GeneratingSeriesValue, right: GeneratingSeriesValue) -> GeneratingSeriesValue:
    """J_a^b from left = J_a^c and right = J_c^b, as J_c^b J_a^c."""
    if not _same_endpoint(left.b, right.a):
        raise ValueError(f"midpoint mismatch: {left.b} vs {right.a}")
    if left.t != right.t or left.family != right.family or left.depth != right.depth:
        raise ValueError("series differ in t, family or depth")
    return GeneratingSeriesValue(
        left.family, left.a, right.b, left.t, right.series * left.series, left.error + right.error
    )


def _act_endpoint(g: Matrix, x):
    if isinstance(x, Cusp):
        return act_cusp(g, x)
    return act_moebius(g, complex(x))


def gamma_action(J: GeneratingSeriesValue, g: Matrix) -> GeneratingSeriesValue:
    """Right action of g on the coefficients of J, read as functions of t.

    J is the series at parameter t' = J.t; the result lives at t = g^{-1} t'
    on the path g^{-1} a -> g^{-1} b, and the coefficient of a word w is
    multiplied by bold_v(g)^{-1} (c t + d)^{bold_k(w)}, the power taken as the
    boundary value from the lower half-plane.
    """
    ginv = g.inverse()
    t = complex(act_moebius(ginv, J.t))  # raises at the pole
    if g.c * t + g.d == 0:
        raise ZeroDivisionError("c t + d vanishes")
    fam = J.family
    chi = fam.character(g)
    # diagonal character: A_m -> v_m(g)^{-1} (c t + d)^{k_m} A_m
    factors = [lower_factor(g, t, F.k) / chi[m] for m, F in enumerate(fam.forms)]
    series = J.series.weight_scale(factors)
    return GeneratingSeriesValue(
        fam, _act_endpoint(ginv, J.a), _act_endpoint(ginv, J.b), t, series, J.error
    )


def shuffles(u: Word, v: Word):
    """All interleavings of u and v, with multiplicity."""
    if not u:
        yield v
        return
    if not v:
        yield u
        return
    for w in shuffles(u[1:], v):
        yield (u[0],) + w
    for w in shuffles(u, v[1:]):
        yield (v[0],) + w


def shuffle_residual(J: GeneratingSeriesValue, w1: Sequence[int], w2: Sequence[int], relative: bool = True) -> float:
    """|J[w1] J[w2] - sum over shuffles J[s]|, relative to max(1, |J[w1] J[w2]|)."""
    w1, w2 = tuple(w1), tuple(w2)
    if len(w1) + len(w2) > J.depth:
        raise ValueError("words exceed the series depth")
    if not w1 or not w2:
        return 0.0
    lhs = J[w1] * J[w2]
    rhs = sum(J[s] for s in shuffles(w1, w2))
    diff = abs(lhs - rhs)
    return diff / max(1.0, abs(lhs)) if relative else diff


def nested_quadrature(family: FormFamily, a, b, t, word: Sequence[int], tol: float = 1e-10) -> complex:
    """Iterated integral of length <= 2 by nested adaptive quadrature.

    Independent of :func:`transport`: scipy's QUADPACK on the same geodesic
    parameter, with the inner integral recomputed at every outer node.
    """
    word = tuple(word)
    if len(word) > 2:
        raise ValueError("nested quadrature is limited to words of length <= 2")
    t = complex(t)
    path = GeodesicPath(a, b)
    if not word:
        return 1.0 + 0j
    if path.is_empty:
        return 0j
    g = family.integrands(path, t)
    s0, s1 = _cut_interval(family, path, t)

    def scalar(m):
        return lambda s: complex(g(s)[m][0])

    opts = dict(complex_func=True, epsabs=0.0, epsrel=tol, limit=400)
    if len(word) == 1:
        return integrate.quad(scalar(word[0]), s0, s1, **opts)[0]
    outer, inner = scalar(word[0]), scalar(word[1])
    # inner integral from s0, accumulated from the nearest point already done
    anchors = [s0]
    values = {s0: 0j}
    direction = 1.0 if s1 >= s0 else -1.0

    def inner_from_start(s):
        key = direction * s
        i = bisect.bisect_right([direction * x for x in anchors], key) - 1
        start = anchors[max(i, 0)]
        val = values[start] + integrate.quad(inner, start, s, **opts)[0]
        bisect.insort(anchors, s, key=lambda x: direction * x)
        values[s] = val
        return val

    def integrand(s):
        return outer(s) * inner_from_start(s)

    return integrate.quad(integrand, s0, s1, **opts)[0]
