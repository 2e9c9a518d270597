"""Verification suites shared by the command line and the test-suite.

Each suite returns a finished :class:`Report`.  Numeric suites take the
forms to check explicitly; an empty family yields no numeric checks.
"""
from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from .cocycles import (
    FreeGroup,
    classical_reciprocity_function,
    check_symbol,
    coprime_pairs,
    left_right_convert,
    pair_to_cocycle,
    random_left_pair,
    random_symbol,
    reciprocity_to_dedekind_cocycle,
    reconstruct_symbol,
    right_left_convert,
    theorem_3_5_1_check,
    validate_reciprocity,
)
from .exact import INF, Cusp, classical_symbol, reciprocity_residual_classical
from .forms import CuspForm
from .iterated import FormFamily, gamma_action, transport
from .modular import SIGMA, TAU, THETA, Matrix, random_matrix
from .multipliers import automorphy_factor, cocycle_residual
from .ncseries import series_residual
from .reciprocity import (
    THETA_SIGMA_THETA,
    double_extension_residual,
    grid_pairs,
    inverse_path_residual,
    scalar_three_term_checks,
    series_three_term_checks,
    sigma_scalar_residual,
)
from .report import Check, Report

__all__ = [
    "SUITES",
    "SERIES_PAIRS",
    "multiplier_suite",
    "lemma_suite",
    "thm32_suite",
    "thm351_suite",
    "dedekind_suite",
    "cocycle_suite",
    "run_suite",
    "series_tolerance",
]

SERIES_PAIRS = ((1, 1), (1, 2), (2, 1), (2, 3), (3, 2))
LEMMA_MATRICES = {"sigma": SIGMA, "theta": THETA, "tau": TAU, "theta.sigma.theta": THETA_SIGMA_THETA}


def series_tolerance(depth: int, base: float) -> float:
    """Depth 4 runs with the relaxed tolerance 1e-4."""
    return max(base, 1e-4) if depth >= 4 else base


def _w(F: CuspForm) -> str:
    return str(F.w)


def _random_upper(rng: random.Random) -> complex:
    return complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5))


# -- multipliers and invariance ------------------------------------------------


def multiplier_suite(forms: Sequence[CuspForm], seed: int = 0, triples: int = 100, points: int = 20) -> Report:
    rep = Report("multiplier")
    rng = random.Random(seed)
    for F in forms:
        w = float(F.w)
        expected = {
            "sigma": (SIGMA, cmath.exp(-1j * math.pi * w / 2)),
            "theta": (THETA, cmath.exp(1j * math.pi * w / 6)),
            "theta.sigma.theta": (THETA_SIGMA_THETA, cmath.exp(-1j * math.pi * w / 6)),
        }
        for name, (g, val) in expected.items():
            r = abs(F.multiplier(g) - val)
            rep.add(Check(f"multiplier/value/w={_w(F)}/{name}", "multiplier value", {"w": _w(F), "g": name}, r, 1e-12))
        worst = 0.0
        for _ in range(triples):
            g, h = random_matrix(rng, 5), random_matrix(rng, 5)
            z = complex(rng.uniform(-2, 2), rng.uniform(0.05, 2))
            worst = max(worst, cocycle_residual(F.multiplier, F.w, g, h, z))
        rep.add(Check(f"multiplier/cocycle/w={_w(F)}", "automorphy cocycle", {"w": _w(F), "triples": triples}, worst, 1e-10))
        for name, g in (("sigma", SIGMA), ("theta", THETA), ("tau", TAU)):
            worst = 0.0
            for _ in range(points):
                z = _random_upper(rng)
                gz = (g.a * z + g.b) / (g.c * z + g.d)
                lhs = F.evaluate(gz)
                rhs = automorphy_factor(F.multiplier, F.w, g, z) * F.evaluate(z)
                worst = max(worst, abs(lhs - rhs) / abs(lhs))
            rep.add(Check(f"multiplier/invariance/w={_w(F)}/{name}", "modular invariance", {"w": _w(F), "g": name, "points": points}, worst, 1e-8))
    return rep.finish()


# -- the weight action on generating series ------------------------------------


def lemma_suite(
    families: Sequence[FormFamily],
    depth: int = 3,
    ts: Sequence[complex] = (-1j, 0.3 - 0.7j, -0.45),
    paths=((Cusp(0, 1), INF), (Cusp(1, 3), Cusp(-2, 5))),
    tol: float = 1e-6,
) -> Report:
    """J_a^b(t') | g against J_{g^-1 a}^{g^-1 b}(g^-1 t') transported directly."""
    rep = Report("lemma241")
    tol = series_tolerance(depth, tol)
    for fam in families:
        label = "+".join(_w(F) for F in fam.forms)
        for gname, g in LEMMA_MATRICES.items():
            worst = 0.0
            for a, b in paths:
                for t in ts:
                    J = transport(fam, a, b, t, depth)
                    moved = gamma_action(J, g)
                    direct = transport(fam, moved.a, moved.b, moved.t, depth)
                    worst = max(worst, series_residual(moved.series, direct.series))
            rep.add(Check(f"lemma241/{label}/{gname}", "weight action", {"family": label, "g": gname, "depth": depth}, worst, tol))
    return rep.finish()


# -- three-term relations ------------------------------------------------------


def thm32_suite(
    forms: Sequence[CuspForm],
    family: Optional[FormFamily],
    depth: int = 3,
    bound: int = 5,
    t: complex = -1j,
) -> Report:
    rep = Report("thm32")
    if forms:
        fam = FormFamily(forms)
        rep.extend(scalar_three_term_checks(fam, bound, 1e-7))
        for j, F in enumerate(fam.forms):
            worst = max(sigma_scalar_residual(fam, j, p, -q) for p, q in grid_pairs(3))
            rep.add(Check(f"thm32/sigma/w={_w(F)}", "sigma scalar", {"w": _w(F), "bound": 3}, worst, 1e-8))
    if family is not None and family.size:
        tol = series_tolerance(depth, 1e-6)
        for n in range(1, depth + 1):
            rep.extend(series_three_term_checks(family, SERIES_PAIRS, n, tol))
        label = "+".join(_w(F) for F in family.forms)
        r = inverse_path_residual(family, t, depth)
        rep.add(Check(f"thm32/inverse/{label}", "inverse path", {"family": label, "depth": depth, "t": t}, r, series_tolerance(depth, 1e-8)))
        r = max(double_extension_residual(family, 1, -q, depth) for q in (1, 2, 3))
        rep.add(Check(f"thm32/double-extension/{label}", "double extension", {"family": label, "depth": depth}, r, series_tolerance(depth, 1e-8)))
    return rep.finish()


def thm351_suite(family: Optional[FormFamily], depth: int = 3, t: complex = -1j, pairs: int = 20) -> Report:
    if family is None or family.size == 0:
        return Report("thm351").finish()
    rep = theorem_3_5_1_check(family, depth, t, series_tolerance(depth, 1e-6), pairs)
    return rep


# -- exact suites --------------------------------------------------------------


def dedekind_suite(bound: int = 200) -> Report:
    """Classical reciprocity over 0 < p, q <= bound and the symbol of the classical f."""
    rep = Report("dedekind")
    bad = [(p, q) for p in range(1, bound + 1) for q in range(1, bound + 1)
           if math.gcd(p, q) == 1 and reciprocity_residual_classical(p, q) != 0]
    rep.add(Check("dedekind/classical-reciprocity", "classical reciprocity", {"bound": bound}, len(bad), exact=True,
                  detail=f"violations: {bad[:5]}" if bad else ""))
    f = classical_reciprocity_function()
    v = validate_reciprocity(f, 30)
    rep.add(Check("dedekind/classical-f", "reciprocity", {"bound": 30}, len(v.violations), exact=True))
    D = reconstruct_symbol(f)
    bad = [(p, q) for p, q in coprime_pairs(30) if D(p, q) != classical_symbol(p, q)]
    rep.add(Check("dedekind/reconstruct-classical", "symbol recovery", {"bound": 30}, len(bad), exact=True))
    return rep.finish()


def cocycle_suite(bound: int = 30, cocycles: int = 50, seed: int = 0) -> Report:
    rep = Report("cocycle")
    G = FreeGroup()
    D0, f = random_symbol(G, seed)
    v = validate_reciprocity(f, bound)
    rep.add(Check("cocycle/free/reciprocity", "reciprocity", {"bound": bound}, len(v.violations), exact=True))
    D = reconstruct_symbol(f)
    sym = check_symbol(D, f, bound)
    rep.add(Check("cocycle/free/symbol", "symbol equations", {"bound": bound}, len(sym.violations), exact=True))
    bad = sum(D(p, q) != D0(p, q) for p, q in coprime_pairs(bound))
    rep.add(Check("cocycle/free/unique", "symbol recovery", {"bound": bound}, bad, exact=True))

    rng = random.Random(seed)
    mismatches = 0
    for i in range(cocycles):
        lam = pair_to_cocycle(random_left_pair(G, seed=i))
        back = right_left_convert(left_right_convert(lam))
        for _ in range(3):
            g = random_matrix(rng, 5)
            mismatches += lam.module.distance(lam(g), back(g)) != 0
    rep.add(Check("cocycle/round-trip", "left-right round trip", {"cocycles": cocycles}, mismatches, exact=True))

    pair = reciprocity_to_dedekind_cocycle(f, check=False)
    rho = left_right_convert(pair_to_cocycle(pair))
    M = pair.module
    r = M.distance(rho(TAU), M.right(rho(SIGMA), SIGMA))
    rep.add(Check("cocycle/dedekind-preserved", "right Dedekind", {}, r, exact=True))

    fc = classical_reciprocity_function()
    cpair = reciprocity_to_dedekind_cocycle(fc, check=False)
    res = cpair.relation_residuals()
    rep.add(Check("cocycle/rational/relations", "left pair relations", {}, res["order2"] + res["order3"], exact=True))
    rep.add(Check("cocycle/rational/dedekind", "left Dedekind", {}, res["dedekind"], exact=True))
    return rep.finish()


SUITES = ("multiplier", "lemma241", "thm32", "thm351", "dedekind", "cocycle")


def run_suite(name: str, forms: Sequence[CuspForm], depth: int = 3, t: complex = -1j) -> Report:
    """Run a named suite (or ``all``) over the given forms."""
    family = FormFamily(forms) if forms else None
    if name == "all":
        rep = Report("all")
        for sub in SUITES:
            rep.extend(run_suite(sub, forms, depth, t).checks)
        return rep.finish()
    if name == "multiplier":
        return multiplier_suite(forms)
    if name == "lemma241":
        fams = [FormFamily([F]) for F in forms[:1]] + ([family] if family is not None and family.size > 1 else [])
        return lemma_suite(fams, depth) if fams else Report("lemma241").finish()
    if name == "thm32":
        return thm32_suite(forms, family, depth, t=t)
    if name == "thm351":
        return thm351_suite(family, depth, t)
    if name == "dedekind":
        return dedekind_suite()
    if name == "cocycle":
        return cocycle_suite()
    raise ValueError(f"unknown suite {name!r}")
