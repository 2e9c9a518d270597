import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dedekind_periods.exact import (
    INF,
    Cusp,
    classical_dedekind_sum,
    classical_reciprocity,
    classical_symbol,
    normalize,
    reciprocity_residual_classical,
    sawtooth,
)
from oracles import sawtooth_sum

coprime = st.tuples(st.integers(-5000, 5000), st.integers(-5000, 5000)).filter(lambda pq: math.gcd(*pq) == 1)
positive_coprime = st.tuples(st.integers(1, 2000), st.integers(1, 2000)).filter(lambda pq: math.gcd(*pq) == 1)


def test_normalize_rejects_non_coprime():
    with pytest.raises(ValueError):
        normalize(2, 4)
    with pytest.raises(ValueError):
        normalize(0, 0)


@pytest.mark.parametrize("pair", [(1, 0), (-3, 5), (0, -1), (7, -2)])
def test_normalize_keeps_signs(pair):
    assert normalize(*pair) == pair


@pytest.mark.parametrize("h,k,expected", [(1, 1, 0), (1, 2, 0), (1, 3, Fraction(1, 18)), (2, 5, 0), (1, 5, Fraction(1, 5))])
def test_dedekind_sum_values(h, k, expected):
    assert classical_dedekind_sum(h, k) == expected
    assert sawtooth_sum(h, k) == expected


@given(positive_coprime)
def test_dedekind_sum_matches_definition(pq):
    h, k = pq
    if k > 300:
        k = k % 300 + 1
        if math.gcd(h, k) != 1:
            return
    assert classical_dedekind_sum(h, k) == sawtooth_sum(h, k)


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (5, 3), (13, 8), (199, 200)])
def test_classical_reciprocity_residual_is_zero(p, q):
    assert reciprocity_residual_classical(p, q) == 0


@given(positive_coprime)
def test_reciprocity_law_exact(pq):
    p, q = pq
    lhs = classical_dedekind_sum(q, p) + classical_dedekind_sum(p, q)
    assert lhs == Fraction(p * p + q * q + 1, 12 * p * q) - Fraction(1, 4)


@given(coprime)
def test_signed_reciprocity(pq):
    p, q = pq
    assert classical_symbol(p, q) - classical_symbol(q, -p) == classical_reciprocity(p, q)


@given(st.fractions())
def test_sawtooth_is_odd_and_periodic(x):
    assert sawtooth(-x) == -sawtooth(x)
    assert sawtooth(x + 1) == sawtooth(x)
    assert -Fraction(1, 2) < sawtooth(x) < Fraction(1, 2)


def test_cusp_normal_form():
    assert Cusp(2, -4) == Cusp(-1, 2)
    assert Cusp(-5, 0) == INF
    assert Cusp.of("inf") is INF
    assert Cusp.of(Fraction(3, 6)) == Cusp(1, 2)
    assert str(Cusp(-2, 5)) == "-2/5"
    with pytest.raises(TypeError):
        Cusp.of(0.5)
    with pytest.raises(ValueError):
        INF.to_fraction()


@given(coprime)
def test_cusp_from_pair(pq):
    c = Cusp.from_pair(pq)
    assert c == Cusp.from_pair((-pq[0], -pq[1]))
    if pq[0]:
        assert c.to_fraction() == Fraction(pq[1], pq[0])
