"""Geodesic paths in H+ and period integrals of omega_F(z; t) = F(z) (z - t)^k dz.

Every path is the hyperbolic geodesic between its endpoints, parameterized
by a real variable s with cusps at s = +-inf:

* vertical line   z(s) = x0 + i exp(s)
* half circle     z(s) = c + r (tanh s + i sech s)

Near a cusp the integrand decays doubly exponentially in s, so the infinite
ends are cut where the integrand has dropped below 1e-22 of its peak.

The branch of (z - t)^k is the principal one.  For z in H+ and t in H- or on
the real line, z - t lies in the open upper half-plane, so the argument stays
in (0, pi) and never jumps along a path.
"""
from __future__ import annotations

import hashlib
import heapq
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional, Tuple, Union

import numpy as np
from numpy.polynomial import legendre

from .exact import INF, Cusp
from .forms import CuspForm
from .modular import SIGMA
from .multipliers import real_power

__all__ = [
    "GeodesicPath",
    "OneForm",
    "as_endpoint",
    "omega_eval",
    "period_integral",
    "period_function",
    "moment_integral",
    "PeriodResult",
    "QuadratureError",
    "PanelRule",
    "panel_rule",
    "path_integrands",
    "find_cutoffs",
    "JsonlCache",
    "default_cache",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10
CUTOFF_RATIO = 1e-22
MIN_IM = 1e-13
MAX_IM = 1e4  # every eta power underflows to 0 well before this height

Endpoint = Union[Cusp, complex]


class QuadratureError(RuntimeError):
    """Adaptive integration failed to reach the requested tolerance."""


def as_endpoint(x) -> Endpoint:
    """Cusps stay exact; points of H+ become complex numbers."""
    if isinstance(x, Cusp):
        return x
    if isinstance(x, (int, Fraction)):
        return Cusp.of(x)
    if isinstance(x, str):
        s = x.strip().lower().replace(" ", "")
        if s in ("inf", "infinity", "oo", "iinf", "i*inf"):
            return INF
        try:
            return Cusp.of(Fraction(s))
        except ValueError:
            x = complex(s.replace("i", "j"))
    x = complex(x)
    if x.imag > 0:
        return x
    if x.imag == 0 and float(x.real).is_integer():
        return Cusp.of(int(x.real))
    raise ValueError(f"{x} is neither a cusp nor a point of the upper half-plane")


def _endpoint_key(x: Endpoint) -> str:
    return str(x) if isinstance(x, Cusp) else repr(complex(x))


@dataclass(frozen=True)
class GeodesicPath:
    """Oriented geodesic segment from ``a`` to ``b`` (cusps or points of H+)."""

    a: Endpoint
    b: Endpoint

    def __post_init__(self):
        object.__setattr__(self, "a", as_endpoint(self.a))
        object.__setattr__(self, "b", as_endpoint(self.b))
        object.__setattr__(self, "_geom", _geometry(self.a, self.b))

    @property
    def kind(self) -> str:
        return self._geom[0]

    @property
    def is_empty(self) -> bool:
        return _same_point(self.a, self.b)

    @property
    def s_range(self) -> Tuple[float, float]:
        """Parameter values (s_a, s_b); cusps sit at +-inf."""
        return self._geom[2], self._geom[3]

    def z(self, s):
        kind, data = self._geom[0], self._geom[1]
        s = np.asarray(s, dtype=float)
        if kind == "vertical":
            return data + 1j * np.exp(s)
        c, r = data
        return c + r * (np.tanh(s) + 1j / np.cosh(s))

    def dz(self, s):
        kind, data = self._geom[0], self._geom[1]
        s = np.asarray(s, dtype=float)
        if kind == "vertical":
            return 1j * np.exp(s)
        c, r = data
        sech = 1 / np.cosh(s)
        return r * (sech**2 - 1j * sech * np.tanh(s))

    def offsets(self, s):
        """z(s) plus, for points attached to a finite cusp end, the offset
        delta = z - cusp computed without cancellation.

        Returns ``(z, groups)`` with ``groups`` a list of (mask, cusp, delta).
        """
        s = np.atleast_1d(np.asarray(s, dtype=float))
        z = self.z(s)
        kind, data = self._geom[0], self._geom[1]
        ends = {}
        for end, val in zip((self.a, self.b), self.s_range):
            if isinstance(end, Cusp) and not end.is_infinite:
                ends[val] = end
        groups = []
        if kind == "vertical" and -math.inf in ends:
            groups.append((np.ones(s.shape, bool), ends[-math.inf], 1j * np.exp(s)))
        elif kind == "circle":
            r = data[1]
            sech = 1 / np.cosh(s)
            if -math.inf in ends:
                mask = s < 0
                delta = 2 * r / (1 + np.exp(-2 * np.minimum(s, 0))) + 1j * r * sech
                groups.append((mask, ends[-math.inf], delta))
            if math.inf in ends:
                mask = s >= 0
                delta = -2 * r / (1 + np.exp(2 * np.maximum(s, 0))) + 1j * r * sech
                groups.append((mask, ends[math.inf], delta))
        return z, groups

    def point_at(self, fraction: float) -> complex:
        """A point of H+ on the path; ``fraction`` in (0, 1) in s-space after
        clipping infinite ends to +-3."""
        sa, sb = (float(np.clip(x, -3, 3)) for x in self.s_range)
        return complex(self.z(sa + fraction * (sb - sa)))

    def key(self) -> str:
        return f"{_endpoint_key(self.a)}->{_endpoint_key(self.b)}"


def _same_point(a: Endpoint, b: Endpoint) -> bool:
    if isinstance(a, Cusp) and isinstance(b, Cusp):
        return a == b
    if isinstance(a, Cusp) or isinstance(b, Cusp):
        return False
    return abs(a - b) == 0


def _circle_param(c: float, r: float, x: float) -> float:
    u = (x - c) / r
    return math.atanh(max(-1.0, min(1.0, u)))


def _geometry(a: Endpoint, b: Endpoint):
    """(kind, data, s_a, s_b) for the geodesic through a and b."""
    if _same_point(a, b):
        return ("point", None, 0.0, 0.0)

    def real_of(x):
        return None if (isinstance(x, Cusp) and x.is_infinite) else (
            float(x.num) / x.den if isinstance(x, Cusp) else x.real
        )

    ra, rb = real_of(a), real_of(b)
    # vertical cases
    if ra is None or rb is None or ra == rb:
        x0 = rb if ra is None else ra
        if ra is None and rb is None:
            raise ValueError("degenerate path inf -> inf")

        def s_of(x):
            if isinstance(x, Cusp):
                return math.inf if x.is_infinite else -math.inf
            return math.log(x.imag)

        return ("vertical", x0, s_of(a), s_of(b))
    # half circle orthogonal to R through a and b
    if isinstance(a, Cusp) and isinstance(b, Cusp):
        c, r = (ra + rb) / 2, abs(rb - ra) / 2
    else:
        za = complex(ra) if isinstance(a, Cusp) else a
        zb = complex(rb) if isinstance(b, Cusp) else b
        c = (abs(za) ** 2 - abs(zb) ** 2) / (2 * (za.real - zb.real))
        r = abs(za - c)

    def s_of(x):
        if isinstance(x, Cusp):
            return -math.inf if real_of(x) < c else math.inf
        return _circle_param(c, r, x.real)

    return ("circle", (c, r), s_of(a), s_of(b))


@dataclass(frozen=True)
class OneForm:
    """omega_F(z; t) = F(z) (z - t)^k dz with k = weight - 2."""

    form: CuspForm
    t: complex

    def __post_init__(self):
        if complex(self.t).imag > 0:
            raise ValueError("the parameter t must lie in the closed lower half-plane")

    @property
    def k(self) -> float:
        return self.form.k


def omega_eval(omega: OneForm, z):
    """F(z) (z - t)^k with the principal branch of the power."""
    z = np.asarray(z, dtype=complex)
    diff = z - omega.t
    if omega.k == 0:
        return omega.form(z)
    return omega.form(z) * np.exp(omega.k * np.log(diff))


# -- Gauss-Legendre panels ---------------------------------------------------


@dataclass(frozen=True)
class PanelRule:
    """Gauss-Legendre nodes on [-1, 1] with cumulative-integration data."""

    nodes: np.ndarray
    weights: np.ndarray
    cumulative: np.ndarray  # C[i, j]: int_{-1}^{x_i} p = sum_j C[i, j] p(x_j)
    to_legendre: np.ndarray  # values at nodes -> Legendre coefficients


@lru_cache(maxsize=None)
def panel_rule(n: int) -> PanelRule:
    x, w = legendre.leggauss(n)
    V = legendre.legvander(x, n - 1)
    Vinv = np.linalg.inv(V)
    A = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        A[:, j] = legendre.legval(x, legendre.legint(e, lbnd=-1))
    return PanelRule(x, w, A @ Vinv, Vinv)


def find_cutoffs(path: GeodesicPath, magnitude: Callable, step: float = 0.5, max_steps: int = 160):
    """Finite (s_start, s_end) with the oriented direction of ``path``.

    ``magnitude(s_array)`` returns |integrand| at parameter values.
    """
    sa, sb = path.s_range
    lo, hi = min(sa, sb), max(sa, sb)
    if math.isfinite(lo) and math.isfinite(hi):
        return sa, sb
    if math.isfinite(lo):
        start = lo
    elif math.isfinite(hi):
        start = hi
    else:
        start = 0.0

    def valid(s):
        y = np.imag(path.z(s))
        return (y > MIN_IM) & (y < MAX_IM)

    def march(direction):
        ss = start + direction * step * np.arange(1, max_steps + 1)
        ok = valid(ss)
        mags = np.zeros_like(ss)
        if ok.any():
            mags[ok] = magnitude(ss[ok])
        return ss, mags, ok

    probes = {}
    peak = float(np.max(magnitude(np.array([start]))))
    for direction, infinite in ((-1, not math.isfinite(lo)), (1, not math.isfinite(hi))):
        if infinite:
            probes[direction] = march(direction)
            peak = max(peak, float(np.max(probes[direction][1])))
    ends = {}
    for direction, (ss, mags, ok) in probes.items():
        small = (mags <= CUTOFF_RATIO * peak) | ~ok
        cut = len(ss) - 1
        run = 0
        for i, flag in enumerate(small):
            run = run + 1 if flag else 0
            if run >= 3 or not ok[i]:
                cut = i
                break
        ends[direction] = float(ss[cut])
    s_lo = ends.get(-1, lo)
    s_hi = ends.get(1, hi)
    return (s_lo, s_hi) if sa <= sb else (s_hi, s_lo)


# -- adaptive Gauss-Legendre on a real interval ------------------------------


def _adaptive_gl(f: Callable, x0: float, x1: float, tol: float, n: int = 15, max_panels: int = 4000):
    """Global adaptive G-L: panel error = |G(P) - G(left) - G(right)|.

    Stops when the summed error is below ``tol`` relative to |I|, or below
    the roundoff floor 1e-15 * int |f| when the integral nearly cancels.
    """
    rule = panel_rule(n)

    def gl(a, b):
        h = (b - a) / 2
        xs = (a + b) / 2 + h * rule.nodes
        fx = f(xs)
        return h * np.dot(rule.weights, fx), abs(h) * np.dot(rule.weights, np.abs(fx))

    def split(a, b):
        m = (a + b) / 2
        whole, _ = gl(a, b)
        (left, la), (right, ra) = gl(a, m), gl(m, b)
        return left + right, abs(whole - left - right), la + ra

    def converged(val, err, mass):
        return err <= max(tol * abs(val), 1e-15 * mass)

    val, err, mass = split(x0, x1)
    heap = [(-err, x0, x1, val, mass)]
    total_val, total_err, total_mass = val, err, mass
    count = 1
    while not converged(total_val, total_err, total_mass) and count < max_panels:
        negerr, a, b, v, am = heapq.heappop(heap)
        m = (a + b) / 2
        v1, e1, m1 = split(a, m)
        v2, e2, m2 = split(m, b)
        total_val += v1 + v2 - v
        total_err += e1 + e2 + negerr
        total_mass += m1 + m2 - am
        heapq.heappush(heap, (-e1, a, m, v1, m1))
        heapq.heappush(heap, (-e2, m, b, v2, m2))
        count += 1
    # resum to limit drift in the running totals
    total_val = sum(item[3] for item in heap)
    total_err = sum(-item[0] for item in heap)
    total_mass = sum(item[4] for item in heap)
    if not converged(total_val, total_err, total_mass):
        raise QuadratureError(
            f"no convergence after {count} subdivisions (error {total_err:.3g})"
        )
    return complex(total_val), float(total_err), float(total_mass)


@dataclass(frozen=True)
class PeriodResult:
    value: complex
    error: float
    mass: float = 0.0  # integral of |integrand|, the roundoff scale

    def __complex__(self):
        return complex(self.value)


def path_integrands(forms, path: GeodesicPath, t: complex):
    """s -> array (len(forms), len(s)) of F(z) (z - t)^k dz/ds along ``path``.

    Near a finite cusp the form is evaluated through the cusp offset, see
    :meth:`CuspForm.evaluate_at_cusp`.
    """

    def g(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        z, groups = path.offsets(s)
        dz = path.dz(s)
        zt = z - t
        rest = np.ones(s.shape, bool)
        for mask, cusp, delta in groups:
            zt[mask] = (cusp.to_complex() - t) + delta[mask]
            rest &= ~mask
        out = np.empty((len(forms), len(s)), dtype=complex)
        for i, F in enumerate(forms):
            vals = np.empty(len(s), dtype=complex)
            for mask, cusp, delta in groups:
                if mask.any():
                    vals[mask] = F.evaluate_at_cusp(cusp, delta[mask])
            if rest.any():
                vals[rest] = F(z[rest])
            out[i] = vals * np.exp(F.k * np.log(zt)) * dz
        return out

    return g


def _integrand_on_path(form: CuspForm, t: complex, path: GeodesicPath):
    g = path_integrands((form,), path, t)
    return lambda s: g(s)[0]


def _zero_to_inf_integrand(form: CuspForm, t: complex):
    """int_0^{i inf} as one integral over u = i e^x, x >= 0.

    The piece 0 -> i is pulled back through z = -1/u, using
    F(-1/u) = v(sigma) u^w F(u).
    """
    k = form.k
    vs = form.multiplier(SIGMA)

    def h(x):
        u = 1j * np.exp(x)
        Fu = form.evaluate(u)
        upper = np.exp(k * np.log(u - t))
        lower = vs * real_power(u, k, "upper") * np.exp(k * np.log(-1.0 / u - t))
        return (upper - lower) * Fu * u

    return h


def _cutoff_x(h: Callable, step: float = 0.25, max_steps: int = 200) -> float:
    xs = step * np.arange(0, max_steps + 1)
    mags = np.abs(h(xs))
    peak = mags.max()
    run = 0
    for i, m in enumerate(mags):
        run = run + 1 if m <= CUTOFF_RATIO * peak else 0
        if run >= 3:
            return float(xs[i])
    raise QuadratureError("integrand does not decay along the imaginary axis")


def period_integral(form: CuspForm, a, b, t, tol: float = DEFAULT_TOL, cache: "JsonlCache" = None) -> PeriodResult:
    """I_a^b(omega_F; t) along the geodesic from a to b, with an error estimate."""
    t = complex(t)
    if t.imag > 0:
        raise ValueError("t must lie in the closed lower half-plane")
    path = GeodesicPath(a, b)
    if path.is_empty:
        return PeriodResult(0j, 0.0, 0.0)
    for end in (path.a, path.b):
        if isinstance(end, Cusp) and not end.is_infinite and t.imag == 0 and end.to_complex() == t:
            raise ValueError("t coincides with a path endpoint")
    key = None
    if cache is not None:
        key = cache.key("period", form.content_hash(), path.key(), t, tol)
        hit = cache.get(key)
        if hit is not None:
            return PeriodResult(hit[0], hit[1], hit[2] if len(hit) > 2 else 0.0)
    zero, inf = Cusp(0, 1), INF
    if {path.a, path.b} == {zero, inf} and all(isinstance(e, Cusp) for e in (path.a, path.b)):
        h = _zero_to_inf_integrand(form, t)
        X = _cutoff_x(h)
        val, err, mass = _adaptive_gl(h, 0.0, X, tol)
        if path.a == inf:
            val = -val
    else:
        g = _integrand_on_path(form, t, path)
        s0, s1 = find_cutoffs(path, lambda s: np.abs(g(s)))
        val, err, mass = _adaptive_gl(g, s0, s1, tol)
    if cache is not None:
        cache.put(key, (val, err, mass))
    return PeriodResult(val, err, mass)


def period_function(form: CuspForm, t, tol: float = DEFAULT_TOL, cache=None) -> PeriodResult:
    """P_F(t) = int_0^{i inf} F(z) (z - t)^k dz."""
    t = complex(t)
    if t == 0:
        raise ValueError("t = 0 is the endpoint of the path 0 -> i inf")
    return period_integral(form, Cusp(0, 1), INF, t, tol, cache)


def moment_integral(form: CuspForm, s: float, tol: float = DEFAULT_TOL) -> PeriodResult:
    """int_0^{i inf} F(z) z^s dz, split at i like the period function."""
    s = float(s)
    w = float(form.w)
    vs = form.multiplier(SIGMA)

    def h(x):
        u = 1j * np.exp(x)
        upper = np.exp(s * np.log(u))
        lower = vs * real_power(u, w, "upper") * np.exp(s * np.log(-1.0 / u)) / u**2
        return (upper - lower) * form.evaluate(u) * u

    val, err, mass = _adaptive_gl(h, 0.0, _cutoff_x(h), tol)
    return PeriodResult(val, err, mass)


# -- cache ---------------------------------------------------------------------


class JsonlCache:
    """Append-only JSON-lines cache of complex values.

    Each line is {"key", "value": [re, im], "error", "mass", "sum"} where
    "sum" is a checksum of the other fields; lines that fail to parse or
    verify are dropped and recomputed on demand.
    """

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self._data = {}
        self.hits = 0
        self.misses = 0
        self.rejected = 0
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                try:
                    rec = json.loads(line)
                    if rec["sum"] != _checksum(rec["key"], rec["value"], rec["error"], rec["mass"]):
                        raise ValueError("checksum")
                    self._data[rec["key"]] = (complex(*rec["value"]), float(rec["error"]), float(rec["mass"]))
                except (ValueError, KeyError, TypeError):
                    self.rejected += 1

    @staticmethod
    def key(*parts) -> str:
        norm = []
        for p in parts:
            if isinstance(p, complex):
                norm.append([p.real.hex(), p.imag.hex()])
            elif isinstance(p, float):
                norm.append(p.hex())
            else:
                norm.append(str(p))
        return hashlib.sha256(json.dumps(norm).encode()).hexdigest()

    def get(self, key: str):
        hit = self._data.get(key)
        if hit is None:
            self.misses += 1
        else:
            self.hits += 1
        return hit

    def put(self, key: str, item) -> None:
        value, error = complex(item[0]), float(item[1])
        mass = float(item[2]) if len(item) > 2 else 0.0
        self._data[key] = (value, error, mass)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        rec = {"key": key, "value": [value.real, value.imag], "error": error, "mass": mass}
        rec["sum"] = _checksum(key, rec["value"], error, mass)
        with self.path.open("a") as fh:
            fh.write(json.dumps(rec) + "\n")

    def __len__(self):
        return len(self._data)


def _checksum(key, value, error, mass) -> str:
    payload = json.dumps([key, [float(value[0]).hex(), float(value[1]).hex()], float(error).hex(), float(mass).hex()])
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


CACHE_ENV = "DEDEKIND_PERIODS_CACHE"


def default_cache(directory: Optional[str] = None) -> JsonlCache:
    directory = directory or os.environ.get(CACHE_ENV) or os.path.join(
        os.path.expanduser("~"), ".cache", "dedekind_periods"
    )
    return JsonlCache(Path(directory) / "values.jsonl")
