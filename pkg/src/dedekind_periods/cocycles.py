"""Reciprocity functions, Dedekind symbols and cocycles of PSL(2, Z).

Coefficients live in an abstract group (free group, additive rationals,
truncated series).  A reciprocity function f on coprime pairs satisfies

    f(p, -q) = f(-p, q),   f(p, q) f(-q, p) = 1,   f(p, p + q) f(p + q, q) = f(p, q),

and its Dedekind symbol D is recovered by Euclidean descent from the base
value D(0, 1) = 1:

    D(p, q) = D(p, q mod p) = f(p, q mod p) D(q mod p, -p).

Cocycles are determined by their values on sigma and tau:

    left:   lam(g h) = lam(g) . g lam(h),        X = lam(sigma), Y = lam(tau)
    right:  rho(g h) = (rho(g) | h) . rho(h),    U = rho(sigma), V = rho(tau)

with g x = x | g^{-1}, and rho(g) = lam(g^{-1})^{-1} converts one into the
other.
"""
from __future__ import annotations

import csv
import io
import math
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .exact import INF, Cusp, classical_reciprocity, normalize
from .iterated import FormFamily, GeneratingSeriesValue, transport
from .modular import (
    GENERATORS,
    IDENTITY,
    SIGMA,
    TAU,
    Matrix,
    act_cusp,
    act_moebius,
    decompose,
    random_matrix,
)
from .ncseries import NCSeries, series_residual
from .report import Check, Report

__all__ = [
    "CoefficientGroup",
    "FreeGroup",
    "AdditiveRationals",
    "AdditiveComplex",
    "SeriesGroup",
    "ReciprocityFunction",
    "DedekindSymbol",
    "ValidationReport",
    "validate_reciprocity",
    "reconstruct_symbol",
    "check_symbol",
    "symbol_class",
    "random_symbol",
    "classical_reciprocity_function",
    "GammaModule",
    "FunctionModule",
    "ModuleFunction",
    "SeriesModule",
    "CocyclePair",
    "Cocycle",
    "pair_to_cocycle",
    "left_right_convert",
    "right_left_convert",
    "cocycle_law_residual",
    "reciprocity_to_dedekind_cocycle",
    "random_left_pair",
    "coboundary_pair",
    "farey_points",
    "translate_path",
    "theorem_3_5_1_check",
    "symbol_table_csv",
    "coprime_pairs",
]


# -- coefficient groups ----------------------------------------------------------


class CoefficientGroup(ABC):
    exact = True

    @abstractmethod
    def identity(self): ...

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def inv(self, a): ...

    def eq(self, a, b) -> bool:
        return a == b

    def distance(self, a, b) -> float:
        """0 for equal elements; for exact groups any difference counts as 1."""
        return 0.0 if self.eq(a, b) else 1.0

    def prod(self, *xs):
        out = self.identity()
        for x in xs:
            out = self.mul(out, x)
        return out

    def serialize(self, a) -> str:
        return str(a)


class FreeGroup(CoefficientGroup):
    """Free group; elements are reduced tuples of (generator, +-1)."""

    def identity(self):
        return ()

    def gen(self, name: str):
        return ((name, 1),)

    def mul(self, a, b):
        out = list(a)
        for letter in b:
            if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def inv(self, a):
        return tuple((g, -e) for g, e in reversed(a))

    def random_element(self, rng: random.Random, names: Sequence[str], max_len: int = 4):
        out = ()
        for _ in range(rng.randint(0, max_len)):
            out = self.mul(out, ((rng.choice(names), rng.choice((1, -1))),))
        return out

    def serialize(self, a) -> str:
        if not a:
            return "1"
        return " ".join(g if e == 1 else f"{g}^-1" for g, e in a)


class AdditiveRationals(CoefficientGroup):
    def identity(self):
        return Fraction(0)

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a


class AdditiveComplex(CoefficientGroup):
    """Complex numbers under addition, equality up to a relative tolerance."""

    exact = False

    def __init__(self, tol: float = 1e-9, scale: float = 1.0):
        self.tol = tol
        self.scale = scale

    def identity(self):
        return 0j

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def distance(self, a, b) -> float:
        return abs(a - b) / max(self.scale, abs(a), abs(b))

    def eq(self, a, b) -> bool:
        return self.distance(a, b) <= self.tol


class SeriesGroup(CoefficientGroup):
    """The truncated series group with numeric equality."""

    exact = False

    def __init__(self, nvars: int, depth: int, tol: float = 1e-9):
        self.nvars, self.depth, self.tol = nvars, depth, tol

    def identity(self):
        return NCSeries.one(self.nvars, self.depth)

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def distance(self, a, b) -> float:
        return series_residual(a, b)

    def eq(self, a, b) -> bool:
        return self.distance(a, b) <= self.tol

    def serialize(self, a) -> str:
        return a.to_json()


# -- reciprocity functions and symbols -------------------------------------------


def coprime_pairs(bound: int, include_zero: bool = True) -> List[Tuple[int, int]]:
    """All coprime (p, q) with |p|, |q| <= bound."""
    out = []
    for p in range(-bound, bound + 1):
        for q in range(-bound, bound + 1):
            if math.gcd(p, q) != 1:
                continue
            if not include_zero and p * q == 0:
                continue
            out.append((p, q))
    return out


class ReciprocityFunction:
    """A map on coprime pairs with memoized values."""

    def __init__(self, fn: Callable[[int, int], Any], group: CoefficientGroup, name: str = "f"):
        self.fn = fn
        self.group = group
        self.name = name
        self._memo: Dict[Tuple[int, int], Any] = {}

    def __call__(self, p: int, q: int):
        key = (p, q)
        if key not in self._memo:
            normalize(p, q)
            self._memo[key] = self.fn(p, q)
        return self._memo[key]

    def perturbed(self, p: int, q: int, delta) -> "ReciprocityFunction":
        """Copy with the single value at (p, q) multiplied by ``delta`` on the right."""
        base = self

        def fn(a, b):
            v = base(a, b)
            return base.group.mul(v, delta) if (a, b) == (p, q) else v

        return ReciprocityFunction(fn, self.group, f"{self.name}*")


@dataclass
class ValidationReport:
    checked: int = 0
    violations: List[Tuple[str, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_checks(self, label: str = "reciprocity") -> List[Check]:
        out = [Check(f"{label}/all", "reciprocity", {"instances": self.checked}, residual=len(self.violations), exact=True)]
        for eq, p, q in self.violations:
            out.append(Check(f"{label}/{eq}/p={p},q={q}", eq, {"p": p, "q": q}, exact=True, passed=False))
        return out


def validate_reciprocity(f: ReciprocityFunction, bound: int) -> ValidationReport:
    """Check the three defining equations on all coprime |p|, |q| <= bound.

    Violations are tagged parity, inversion, three-term or unit (for the
    derived values f(1, 1) = f(-1, 1) = 1).
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    G = f.group
    rep = ValidationReport()
    one = G.identity()
    for p, q in coprime_pairs(bound):
        rep.checked += 3
        if not G.eq(f(p, -q), f(-p, q)):
            rep.violations.append(("parity", p, q))
        if not G.eq(G.mul(f(p, q), f(-q, p)), one):
            rep.violations.append(("inversion", p, q))
        if not G.eq(G.mul(f(p, p + q), f(p + q, q)), f(p, q)):
            rep.violations.append(("three-term", p, q))
    for p, q in ((1, 1), (-1, 1)):
        rep.checked += 1
        if not G.eq(f(p, q), one):
            rep.violations.append(("unit", p, q))
    return rep


class DedekindSymbol:
    """A map on coprime pairs with memoized values and CSV export."""

    def __init__(self, fn: Callable[[int, int], Any], group: CoefficientGroup):
        self.fn = fn
        self.group = group
        self._memo: Dict[Tuple[int, int], Any] = {}

    def __call__(self, p: int, q: int):
        key = (p, q)
        if key not in self._memo:
            normalize(p, q)
            self._memo[key] = self.fn(p, q)
        return self._memo[key]

    def to_csv(self, pairs: Iterable[Tuple[int, int]]) -> str:
        return symbol_table_csv(self, pairs)


def reconstruct_symbol(f: ReciprocityFunction, base=None) -> DedekindSymbol:
    """The Dedekind symbol of f with D(0, 1) = ``base`` (default: identity)."""
    G = f.group
    base = G.identity() if base is None else base

    def D(p: int, q: int):
        factors = []
        # each step replaces (p, q) by (q mod p, -p); |p| strictly decreases
        while True:
            if p < 0:
                p, q = -p, -q
            if p == 0:
                break
            q %= p
            factors.append(f(p, q))
            p, q = q, -p
        out = base
        for x in reversed(factors):
            out = G.mul(x, out)
        return out

    return DedekindSymbol(D, G)


def check_symbol(D: DedekindSymbol, f: ReciprocityFunction, bound: int) -> ValidationReport:
    """Check D(p,q) = D(p,q+p), D(p,-q) = D(-p,q) and D(p,q) D(q,-p)^{-1} = f(p,q)."""
    G = f.group
    rep = ValidationReport()
    for p, q in coprime_pairs(bound):
        rep.checked += 3
        if not G.eq(D(p, q), D(p, q + p)):
            rep.violations.append(("periodicity", p, q))
        if not G.eq(D(p, -q), D(-p, q)):
            rep.violations.append(("sign", p, q))
        if not G.eq(G.mul(D(p, q), G.inv(D(q, -p))), f(p, q)):
            rep.violations.append(("recovery", p, q))
    return rep


def symbol_class(p: int, q: int) -> Tuple[int, int]:
    """Representative of (p, q) under (p, q) ~ (p, q + p) ~ (-p, -q)."""
    if p == 0:
        return (0, 1)
    if p < 0:
        p, q = -p, -q
    return (p, q % p)


def random_symbol(group: FreeGroup, seed: int = 0, names: Sequence[str] = ("a", "b", "c")):
    """A random symbol D0 with D0(0, 1) = 1 and its reciprocity function.

    D0 is constant on the classes of :func:`symbol_class` and otherwise
    arbitrary, so f(p, q) := D0(p, q) D0(q, -p)^{-1} satisfies the defining
    equations and reconstruction must return D0 itself.
    """

    def D0(p, q):
        rep = symbol_class(p, q)
        if rep == (0, 1):
            return group.identity()
        rng = random.Random(f"symbol:{seed}:{rep[0]}:{rep[1]}")
        return group.random_element(rng, names)

    sym = DedekindSymbol(D0, group)
    f = ReciprocityFunction(lambda p, q: group.mul(sym(p, q), group.inv(sym(q, -p))), group, "f_D0")
    return sym, f


def classical_reciprocity_function() -> ReciprocityFunction:
    """(p^2 + q^2 + 1)/(12 p q) - sgn(p q)/4 with value 0 when p q = 0."""
    return ReciprocityFunction(classical_reciprocity, AdditiveRationals(), "classical")


def symbol_table_csv(D, pairs: Iterable[Tuple[int, int]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["p", "q", "value"])
    for p, q in pairs:
        writer.writerow([p, q, D.group.serialize(D(p, q))])
    return buf.getvalue()


# -- Gamma-modules ---------------------------------------------------------------


class GammaModule(ABC):
    """A group with a left action of PSL(2, Z); the right action is x | g = g^{-1} x."""

    coefficients: CoefficientGroup

    @abstractmethod
    def identity(self): ...

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def inv(self, a): ...

    @abstractmethod
    def left(self, g: Matrix, a): ...

    def right(self, a, g: Matrix):
        return self.left(g.inverse(), a)

    @abstractmethod
    def distance(self, a, b) -> float: ...

    def eq(self, a, b) -> bool:
        return self.distance(a, b) <= getattr(self.coefficients, "tol", 0.0)

    def prod(self, *xs):
        out = self.identity()
        for x in xs:
            out = self.mul(out, x)
        return out


class ModuleFunction:
    """A lazily evaluated map P^1(Q) -> G0 with memoized values."""

    __slots__ = ("fn", "_memo")

    def __init__(self, fn: Callable[[Cusp], Any]):
        self.fn = fn
        self._memo: Dict[Cusp, Any] = {}

    def __call__(self, x) -> Any:
        x = Cusp.of(x)
        if x not in self._memo:
            self._memo[x] = self.fn(x)
        return self._memo[x]


def farey_points(max_den: int = 12, span: int = 3) -> List[Cusp]:
    pts = {INF}
    for den in range(1, max_den + 1):
        for num in range(-span * den, span * den + 1):
            if math.gcd(num, den) == 1:
                pts.add(Cusp(num, den))
    return sorted(pts, key=lambda c: (c.den, c.num))


class FunctionModule(GammaModule):
    """Maps P^1(Q) -> G0 with pointwise product and (g f)(x) = f(g^{-1} x).

    Equality is tested on a fixed finite set of points of P^1(Q).
    """

    def __init__(self, coefficients: CoefficientGroup, samples: Optional[Sequence[Cusp]] = None):
        self.coefficients = coefficients
        self.samples = list(samples) if samples is not None else farey_points()

    def identity(self):
        one = self.coefficients.identity()
        return ModuleFunction(lambda x: one)

    def constant(self, value):
        return ModuleFunction(lambda x: value)

    def mul(self, a, b):
        G = self.coefficients
        return ModuleFunction(lambda x: G.mul(a(x), b(x)))

    def inv(self, a):
        G = self.coefficients
        return ModuleFunction(lambda x: G.inv(a(x)))

    def left(self, g: Matrix, a):
        ginv = g.inverse()
        return ModuleFunction(lambda x: a(act_cusp(ginv, x)))

    def distance(self, a, b) -> float:
        G = self.coefficients
        return max((G.distance(a(x), b(x)) for x in self.samples), default=0.0)


class SeriesModule(GammaModule):
    """Truncated series with PSL(2, Z) acting through a character.

    ``chi_sigma[m]`` and ``chi_tau[m]`` are a square and a cube root of
    unity; g acts by A_m -> chi_m(g)^{-1} A_m, where chi_m is the character
    taking these values on sigma and tau.
    """

    def __init__(self, nvars: int, depth: int, chi_sigma: Sequence[int], chi_tau: Sequence[int], tol: float = 1e-9):
        self.coefficients = SeriesGroup(nvars, depth, tol)
        self.chi_sigma = list(chi_sigma)  # exponents mod 2
        self.chi_tau = list(chi_tau)  # exponents mod 3

    def character(self, g: Matrix) -> List[complex]:
        word = decompose(g)
        ns = word.count("s")
        nt = word.count("t") + 2 * word.count("t2")
        out = []
        for es, et in zip(self.chi_sigma, self.chi_tau):
            phase = Fraction(es * ns, 2) + Fraction(et * nt, 3)
            out.append(complex(math.cos(2 * math.pi * phase), math.sin(2 * math.pi * phase)))
        return out

    def identity(self):
        return self.coefficients.identity()

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def left(self, g: Matrix, a):
        return a.scale(self.character(g))

    def distance(self, a, b) -> float:
        return series_residual(a, b)


# -- cocycles --------------------------------------------------------------------


@dataclass
class CocyclePair:
    """(X, Y) for a left cocycle or (U, V) for a right one."""

    module: GammaModule
    first: Any  # value at sigma
    second: Any  # value at tau
    side: str = "left"

    def relation_residuals(self) -> Dict[str, float]:
        M = self.module
        one = M.identity()
        A, B = self.first, self.second
        tau2 = TAU @ TAU
        if self.side == "left":
            r1 = M.distance(M.mul(A, M.left(SIGMA, A)), one)
            r2 = M.distance(M.prod(B, M.left(TAU, B), M.left(tau2, B)), one)
            dd = M.distance(B, M.left(TAU, A))
        else:
            r1 = M.distance(M.mul(M.right(A, SIGMA), A), one)
            r2 = M.distance(M.prod(M.right(B, tau2), M.right(B, TAU), B), one)
            dd = M.distance(B, M.right(A, SIGMA))
        return {"order2": r1, "order3": r2, "dedekind": dd}

    def is_dedekind(self) -> bool:
        return self.relation_residuals()["dedekind"] <= getattr(self.module.coefficients, "tol", 0.0)


class Cocycle:
    """A left or right cocycle PSL(2, Z) -> module, memoized by PSL class."""

    def __init__(self, module: GammaModule, side: str, evaluator: Callable[[Matrix], Any]):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.module = module
        self.side = side
        self._eval = evaluator
        self._memo: Dict[Tuple[int, int, int, int], Any] = {}

    def __call__(self, g: Matrix):
        key = g.psl_key()
        if key not in self._memo:
            self._memo[key] = self._eval(g)
        return self._memo[key]


def pair_to_cocycle(pair: CocyclePair, side: Optional[str] = None, check: bool = True) -> Cocycle:
    """Extend generator values along the normal form of g with the cocycle law."""
    side = side or pair.side
    if side != pair.side:
        raise ValueError("the pair was built for the other side")
    M = pair.module
    if check:
        res = pair.relation_residuals()
        tol = getattr(M.coefficients, "tol", 0.0)
        bad = {k: v for k, v in res.items() if k != "dedekind" and v > tol}
        if bad:
            raise ValueError(f"generator values violate the relations: {bad}")
    A, B = pair.first, pair.second
    if side == "left":
        values = {"s": A, "t": B, "t2": M.mul(B, M.left(TAU, B))}

        def lam(g: Matrix):
            out = M.identity()
            prefix = IDENTITY
            for letter in decompose(g):
                out = M.mul(out, M.left(prefix, values[letter]))
                prefix = prefix @ GENERATORS[letter]
            return out

        return Cocycle(M, "left", lam)
    values = {"s": A, "t": B, "t2": M.mul(M.right(B, TAU), B)}

    def rho(g: Matrix):
        out = M.identity()
        suffix = IDENTITY
        for letter in reversed(decompose(g)):
            out = M.mul(M.right(values[letter], suffix), out)
            suffix = GENERATORS[letter] @ suffix
        return out

    return Cocycle(M, "right", rho)


def left_right_convert(lam: Cocycle) -> Cocycle:
    """rho(g) = lam(g^{-1})^{-1}."""
    if lam.side != "left":
        raise ValueError("expected a left cocycle")
    M = lam.module
    return Cocycle(M, "right", lambda g: M.inv(lam(g.inverse())))


def right_left_convert(rho: Cocycle) -> Cocycle:
    """lam(g) = rho(g^{-1})^{-1}."""
    if rho.side != "right":
        raise ValueError("expected a right cocycle")
    M = rho.module
    return Cocycle(M, "left", lambda g: M.inv(rho(g.inverse())))


def cocycle_law_residual(c: Cocycle, g: Matrix, h: Matrix) -> float:
    M = c.module
    if c.side == "left":
        rhs = M.mul(c(g), M.left(g, c(h)))
    else:
        rhs = M.mul(M.right(c(g), h), c(h))
    return M.distance(c(g @ h), rhs)


def reciprocity_to_dedekind_cocycle(f: ReciprocityFunction, samples=None, check: bool = True) -> CocyclePair:
    """X_f(q/p) = f(p, q) and Y_f(q/p) = f(q, q - p) in the function module."""
    M = FunctionModule(f.group, samples)

    def X(x: Cusp):
        return f(x.den, x.num)

    def Y(x: Cusp):
        return f(x.num, x.num - x.den)

    pair = CocyclePair(M, ModuleFunction(X), ModuleFunction(Y), "left")
    if check:
        rep = pair.relation_residuals()
        tol = getattr(f.group, "tol", 0.0)
        bad = {k: v for k, v in rep.items() if v > tol}
        if bad:
            witness = _witness(pair)
            raise ValueError(f"not a reciprocity function: {bad}; first failing point {witness}")
    return pair


def _witness(pair: CocyclePair):
    M = pair.module
    G = M.coefficients
    X, Y = pair.first, pair.second
    for x in M.samples:
        if not G.eq(G.mul(X(x), X(act_cusp(SIGMA, x))), G.identity()):
            return ("X sigma X", str(x))
        tinv = TAU.inverse()
        if not G.eq(G.prod(Y(x), Y(act_cusp(tinv, x)), Y(act_cusp(tinv @ tinv, x))), G.identity()):
            return ("Y tau Y tau^2 Y", str(x))
    return None


def coboundary_pair(module: GammaModule, Z, side: str = "left") -> CocyclePair:
    """The pair of the coboundary g -> Z (g Z)^{-1} (left) or (Z | g)^{-1} Z (right)."""
    M = module
    if side == "left":
        return CocyclePair(M, M.mul(Z, M.inv(M.left(SIGMA, Z))), M.mul(Z, M.inv(M.left(TAU, Z))), "left")
    return CocyclePair(M, M.mul(M.inv(M.right(Z, SIGMA)), Z), M.mul(M.inv(M.right(Z, TAU)), Z), "right")


def _cusp_key(x: Cusp) -> Tuple[int, int]:
    return (x.den, x.num)


def random_left_pair(group: FreeGroup, seed: int = 0, names: Sequence[str] = ("a", "b"), samples=None) -> CocyclePair:
    """A random left pair (X, Y) in the function module, built orbit by orbit.

    X is chosen on each {x, sigma x} with X(sigma x) = X(x)^{-1}; Y on each
    three-point tau-orbit with product 1 in the orbit order, so both
    relations hold pointwise.  No Dedekind condition is imposed.
    """
    M = FunctionModule(group, samples)
    tinv = TAU.inverse()

    def X(x: Cusp):
        partner = act_cusp(SIGMA, x)
        rep = min(x, partner, key=_cusp_key)
        r = group.random_element(random.Random(f"X:{seed}:{rep}"), names)
        return r if x == rep else group.inv(r)

    def Y(x: Cusp):
        orbit = [x, act_cusp(tinv, x), act_cusp(tinv @ tinv, x)]
        rep = min(orbit, key=_cusp_key)
        c0, c1 = rep, act_cusp(tinv, rep)
        r1 = group.random_element(random.Random(f"Y1:{seed}:{rep}"), names)
        r2 = group.random_element(random.Random(f"Y2:{seed}:{rep}"), names)
        if x == c0:
            return r1
        if x == c1:
            return r2
        return group.inv(group.mul(r1, r2))

    return CocyclePair(M, ModuleFunction(X), ModuleFunction(Y), "left")


# -- the cocycle of iterated periods ------------------------------------------------


def _act(g: Matrix, x):
    return act_cusp(g, x) if isinstance(x, Cusp) else complex(act_moebius(g, x))


def _same(x, y) -> bool:
    if isinstance(x, Cusp) or isinstance(y, Cusp):
        return x == y
    return abs(x - y) <= 1e-12 * max(1.0, abs(x))


def translate_path(J: GeneratingSeriesValue, g: Matrix, tol: Optional[float] = None) -> GeneratingSeriesValue:
    """g J_a^b = J_{g a}^{g b}: the path moves, the parameter t stays."""
    kw = {} if tol is None else {"tol": tol}
    return transport(J.family, _act(g, J.a), _act(g, J.b), J.t, J.depth, **kw)


def theorem_3_5_1_check(
    family: FormFamily,
    depth: int,
    t: complex = -1j,
    tol: float = 1e-6,
    pairs: int = 20,
    seed: int = 0,
    base=None,
    max_length: int = 4,
) -> Report:
    """X = J_0^inf, Y = J_1^0 form a left Dedekind pair, and g -> J^a_{g a} is a cocycle.

    The base point ``a`` defaults to i; a cusp such as Cusp(0, 1) works too.
    """
    rep = Report("thm351")
    zero, one = Cusp(0, 1), Cusp(1, 1)
    unit = NCSeries.one(family.size, depth)
    X = transport(family, zero, INF, t, depth)
    Y = transport(family, one, zero, t, depth)
    sX = translate_path(X, SIGMA)
    tY = translate_path(Y, TAU)
    t2Y = translate_path(Y, TAU @ TAU)
    tX = translate_path(X, TAU)
    inputs = {"depth": depth, "t": t, "family": [str(F.w) for F in family.forms]}
    rep.add(Check("thm351/X.sX", "X.sigmaX=1", inputs, series_residual(X.series * sX.series, unit), tol))
    rep.add(Check("thm351/Y.tY.t2Y", "Y.tauY.tau2Y=1", inputs, series_residual(Y.series * tY.series * t2Y.series, unit), tol))
    rep.add(Check("thm351/tX=Y", "tauX=Y", inputs, series_residual(tX.series, Y.series), tol))
    a = 1j if base is None else base
    rng = random.Random(seed)
    for i in range(pairs):
        # pairs where g or h fixes a point of the chain test nothing
        while True:
            g = random_matrix(rng, max_length)
            h = random_matrix(rng, max_length)
            pts = [a, _act(g, a), _act(g @ h, a)]
            if all(not _same(x, y) for j, x in enumerate(pts) for y in pts[j + 1 :]):
                break
        lam_gh = transport(family, _act(g @ h, a), a, t, depth)
        lam_g = transport(family, _act(g, a), a, t, depth)
        g_lam_h = transport(family, _act(g @ h, a), _act(g, a), t, depth)
        r = series_residual(lam_gh.series, lam_g.series * g_lam_h.series)
        rep.add(Check(f"thm351/lambda/{i:02d}", "lambda cocycle", {**inputs, "g": g.to_list(), "h": h.to_list()}, r, tol))
    return rep.finish()
