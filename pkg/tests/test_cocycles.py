import math
import random
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dedekind_periods.cocycles import (
    AdditiveComplex,
    AdditiveRationals,
    Cocycle,
    CocyclePair,
    FreeGroup,
    FunctionModule,
    ReciprocityFunction,
    SeriesGroup,
    SeriesModule,
    check_symbol,
    classical_reciprocity_function,
    coboundary_pair,
    cocycle_law_residual,
    coprime_pairs,
    farey_points,
    left_right_convert,
    pair_to_cocycle,
    random_left_pair,
    random_symbol,
    reciprocity_to_dedekind_cocycle,
    reconstruct_symbol,
    right_left_convert,
    symbol_class,
    symbol_table_csv,
    theorem_3_5_1_check,
    translate_path,
    validate_reciprocity,
)
from dedekind_periods.exact import INF, Cusp, classical_symbol
from dedekind_periods.iterated import FormFamily, transport
from dedekind_periods.modular import IDENTITY, SIGMA, TAU, random_matrix
from dedekind_periods.ncseries import NCSeries, series_residual
from oracles import delta_moment, sawtooth_sum

G = FreeGroup()
names = st.sampled_from(["a", "b", "c"])
words = st.lists(st.tuples(names, st.sampled_from([1, -1])), max_size=6).map(
    lambda xs: G.prod(*[G.gen(n) if e == 1 else G.inv(G.gen(n)) for n, e in xs])
)


@given(words, words, words)
def test_free_group_axioms(x, y, z):
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
    assert G.mul(x, G.inv(x)) == G.identity() == G.mul(G.inv(x), x)
    assert G.mul(x, G.identity()) == x


def test_free_group_reduction_and_serialization():
    a, b = G.gen("a"), G.gen("b")
    w = G.prod(a, b, G.inv(b), G.inv(b))
    assert w == (("a", 1), ("b", -1))
    assert G.serialize(w) == "a b^-1"
    assert G.serialize(G.identity()) == "1"


def test_other_groups():
    Q = AdditiveRationals()
    assert Q.mul(Fraction(1, 3), Q.inv(Fraction(1, 3))) == 0
    C = AdditiveComplex(tol=1e-9, scale=10.0)
    assert C.eq(1.0, 1.0 + 1e-9) and not C.eq(0.0, 1.0)
    S = SeriesGroup(2, 2)
    x = NCSeries(2, 2, {(0,): 1.0, (0, 1): 2.0})
    assert S.eq(S.mul(x, S.inv(x)), S.identity())


# -- reciprocity functions and symbols ---------------------------------------------


def test_identity_function_validates():
    f = ReciprocityFunction(lambda p, q: G.identity(), G)
    rep = validate_reciprocity(f, 8)
    assert rep.passed and rep.checked > 0
    D = reconstruct_symbol(f)
    assert all(D(p, q) == G.identity() for p, q in coprime_pairs(8))
    with pytest.raises(ValueError):
        validate_reciprocity(f, 0)


def test_classical_function():
    f = classical_reciprocity_function()
    assert validate_reciprocity(f, 25).passed
    D = reconstruct_symbol(f)
    for p, q in coprime_pairs(25):
        assert D(p, q) == classical_symbol(p, q)
    for h, k in [(1, 5), (3, 7), (5, 12), (-4, 9), (10, 21)]:
        assert D(k, h) == sawtooth_sum(h, k)
    assert check_symbol(D, f, 15).passed


def test_symbol_base_value():
    f = classical_reciprocity_function()
    D = reconstruct_symbol(f, base=Fraction(5))
    assert D(0, 1) == 5
    assert D(7, 3) == classical_symbol(7, 3) + 5


@lru_cache(maxsize=None)
def _moments():
    return tuple(delta_moment(s) for s in range(11))


def _delta_f(p, q):
    m = _moments()
    return sum(math.comb(10, s) * p**s * (-q) ** (10 - s) * m[s] for s in range(11))


def test_period_polynomial_is_additive_reciprocity_function():
    scale = max(abs(x) for x in _moments()) * 10 ** 10
    f = ReciprocityFunction(_delta_f, AdditiveComplex(tol=1e-9, scale=scale))
    rep = validate_reciprocity(f, 5)
    # f(1, 1) is not zero here, so only the unit checks fail
    assert {tag for tag, _, _ in rep.violations} <= {"unit"}
    D = reconstruct_symbol(f)
    assert check_symbol(D, f, 4).passed


def test_corrupted_function_pinpointed():
    D0, f = random_symbol(G, seed=3)
    assert validate_reciprocity(f, 6).passed
    bad = f.perturbed(2, 3, G.gen("z"))
    rep = validate_reciprocity(bad, 6)
    assert not rep.passed
    assert all((2, 3) in {(p, q), (-q, p), (p, p + q), (p + q, q), (p, -q), (-p, q)} for _, p, q in rep.violations)
    assert {"inversion", "three-term"} <= {tag for tag, _, _ in rep.violations}
    checks = rep.to_checks()
    assert not checks[0].passed and len(checks) == len(rep.violations) + 1


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_free_symbol_reconstruction(seed):
    D0, f = random_symbol(G, seed)
    D = reconstruct_symbol(f)
    for p, q in coprime_pairs(7):
        assert D(p, q) == D0(p, q)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-5, 5))
def test_symbol_class(p, q, n):
    if math.gcd(p, q) != 1:
        return
    assert symbol_class(p, q) == symbol_class(p, q + n * p) == symbol_class(-p, -q)


def test_csv_export():
    f = classical_reciprocity_function()
    D = reconstruct_symbol(f)
    text = symbol_table_csv(D, [(0, 1), (3, 1), (5, 2)])
    assert text.splitlines() == ["p,q,value", "0,1,0", "3,1,1/18", "5,2,0"]
    assert D.to_csv([(3, 1)]) == "p,q,value\r\n3,1,1/18\r\n"


# -- cocycles ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def free_pair():
    return random_left_pair(G, seed=7, samples=farey_points(6, 2))


def test_values_at_generators(free_pair):
    lam = pair_to_cocycle(free_pair)
    M = free_pair.module
    assert M.eq(lam(IDENTITY), M.identity())
    assert M.eq(lam(SIGMA), free_pair.first)
    assert M.eq(lam(TAU), free_pair.second)


def test_left_cocycle_law(free_pair):
    lam = pair_to_cocycle(free_pair)
    rng = random.Random(1)
    for _ in range(50):
        g, h = random_matrix(rng, 5), random_matrix(rng, 5)
        assert cocycle_law_residual(lam, g, h) == 0


def test_round_trip(free_pair):
    lam = pair_to_cocycle(free_pair)
    rho = left_right_convert(lam)
    back = right_left_convert(rho)
    rng = random.Random(2)
    for _ in range(20):
        g, h = random_matrix(rng, 5), random_matrix(rng, 5)
        assert cocycle_law_residual(rho, g, h) == 0
        assert lam.module.distance(lam(g), back(g)) == 0
    with pytest.raises(ValueError):
        left_right_convert(rho)
    with pytest.raises(ValueError):
        right_left_convert(lam)


def test_right_pair_matches_conversion(free_pair):
    M = free_pair.module
    rho = left_right_convert(pair_to_cocycle(free_pair))
    direct = pair_to_cocycle(CocyclePair(M, rho(SIGMA), rho(TAU), "right"))
    rng = random.Random(3)
    for _ in range(20):
        g = random_matrix(rng, 6)
        assert M.distance(direct(g), rho(g)) == 0


def test_bad_pair_rejected(free_pair):
    M = free_pair.module
    bad = CocyclePair(M, M.constant(G.gen("a")), free_pair.second)
    with pytest.raises(ValueError):
        pair_to_cocycle(bad)
    with pytest.raises(ValueError):
        pair_to_cocycle(free_pair, side="right")
    with pytest.raises(ValueError):
        Cocycle(M, "middle", lambda g: None)


def test_series_module_coboundary():
    M = SeriesModule(2, 3, chi_sigma=[1, 0], chi_tau=[1, 2])
    rng = random.Random(4)
    Z = NCSeries(2, 3, {w: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for w in [(0,), (1,), (0, 1), (1, 1, 0)]})
    for side in ("left", "right"):
        pair = coboundary_pair(M, Z, side)
        c = pair_to_cocycle(pair)
        for _ in range(50):
            g, h = random_matrix(rng, 5), random_matrix(rng, 5)
            assert cocycle_law_residual(c, g, h) < 1e-7


def test_dedekind_cocycle_of_reciprocity_function():
    D0, f = random_symbol(G, seed=11)
    pts = farey_points(6, 2)
    pair = reciprocity_to_dedekind_cocycle(f, pts)
    assert pair.is_dedekind()
    rho = left_right_convert(pair_to_cocycle(pair))
    M = pair.module
    assert M.distance(rho(TAU), M.right(rho(SIGMA), SIGMA)) == 0
    # X(q/p) = f(p, q) does not depend on the sign of (p, q)
    assert pair.first(Cusp(-2, 3)) == f(3, -2) == f(-3, 2)


def test_identity_and_classical_pairs():
    one = ReciprocityFunction(lambda p, q: G.identity(), G)
    pair = reciprocity_to_dedekind_cocycle(one, farey_points(4, 1))
    assert all(v == 0 for v in pair.relation_residuals().values())
    cpair = reciprocity_to_dedekind_cocycle(classical_reciprocity_function(), farey_points(6, 2))
    assert all(v == 0 for v in cpair.relation_residuals().values())


def test_witness_for_non_reciprocity():
    f = ReciprocityFunction(lambda p, q: Fraction(p), AdditiveRationals())
    with pytest.raises(ValueError, match="first failing point"):
        reciprocity_to_dedekind_cocycle(f, farey_points(3, 1))


# -- iterated periods ----------------------------------------------------------------


def test_translate_path(fam_delta):
    J = transport(fam_delta, Cusp(0, 1), INF, -1j, 2)
    moved = translate_path(J, SIGMA)
    assert moved.a == INF and moved.b == Cusp(0, 1) and moved.t == J.t
    assert series_residual(moved.series * J.series, NCSeries.one(1, 2)) < 1e-8


def test_theorem_depth_zero(fam_pair):
    rep = theorem_3_5_1_check(fam_pair, 0, pairs=5)
    assert rep.passed and all(c.residual == 0 for c in rep.checks)


def test_theorem_delta(fam_delta):
    rep = theorem_3_5_1_check(fam_delta, 2, pairs=8)
    assert rep.passed and max(c.residual for c in rep.checks) < 1e-7
    assert {"thm351/X.sX", "thm351/Y.tY.t2Y", "thm351/tX=Y"} <= {c.id for c in rep.checks}


def test_theorem_real_weight(eta106):
    rep = theorem_3_5_1_check(FormFamily([eta106]), 2, t=0.3 - 0.6j, pairs=8, seed=5)
    assert max(c.residual for c in rep.checks) < 1e-6


def test_theorem_cusp_base(fam_delta):
    rep = theorem_3_5_1_check(fam_delta, 2, pairs=6, base=Cusp(0, 1))
    assert rep.passed
