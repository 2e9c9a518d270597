import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from dedekind_periods.exact import Cusp
from dedekind_periods.forms import (
    BUILTIN_WEIGHTS,
    CuspForm,
    TailBoundError,
    builtin_forms,
    eta_power,
    eta_power_coefficients,
)
from dedekind_periods.modular import SIGMA, THETA
from dedekind_periods.multipliers import real_power
from oracles import eta_pentagonal, eta_power_direct, pentagonal_coefficients, ramanujan_tau

TST = THETA @ SIGMA @ THETA


def test_delta_coefficients():
    assert eta_power_coefficients(12, 30, exact=True) == ramanujan_tau(31)[1:]
    np.testing.assert_allclose(eta_power_coefficients(12, 30), ramanujan_tau(31)[1:], rtol=1e-13)


def test_eta_is_pentagonal():
    assert eta_power_coefficients(Fraction(1, 2), 60, exact=True) == pentagonal_coefficients(60)
    F = eta_power(Fraction(1, 2))
    assert F.alpha == pytest.approx(1 / 24)
    assert F.coefficients[1] == -1


@pytest.mark.parametrize("w", [Fraction(53, 10), 0.37, 3])
def test_leading_coefficient(w):
    assert eta_power_coefficients(w, 5)[0] == 1


def test_exact_coefficients_for_rational_weight():
    b = eta_power_coefficients(Fraction(53, 10), 20, exact=True)
    np.testing.assert_allclose([float(x) for x in b], eta_power_coefficients(Fraction(53, 10), 20), rtol=1e-12)


def test_builtin_forms():
    forms = builtin_forms()
    assert {float(w) for w in BUILTIN_WEIGHTS} >= {0.5, 5.3, 10.6, 12.0}
    assert forms["12"].k == 10


def test_delta_at_i():
    F = eta_power(12)
    assert abs(F.evaluate(1j) - eta_power_direct(12, 1j)) < 1e-12 * abs(F.evaluate(1j))
    assert F(1j) == pytest.approx(F.evaluate(1j), rel=1e-14)
    assert F.evaluate_near_zero(1j) == pytest.approx(F.evaluate(1j), rel=1e-13)


def test_decay_bound():
    for w in BUILTIN_WEIGHTS:
        F = eta_power(w)
        assert abs(F(10j)) <= 2 * math.exp(-2 * math.pi * F.alpha * 10)


def test_eta_squared():
    assert abs(eta_power(1)(1j) - eta_power(Fraction(1, 2))(1j) ** 2) < 1e-12


@pytest.mark.parametrize("w", [Fraction(1, 2), Fraction(53, 10), 12])
@pytest.mark.parametrize("z", [0.3 + 0.2j, -0.45 + 0.05j, 2.1 + 0.9j, 0.01 + 0.3j])
def test_against_product_oracle(w, z):
    value = eta_power(w)(z)
    ref = eta_power_direct(w, z, dps=40)
    assert abs(value - ref) <= 1e-10 * abs(ref)


def test_delta_near_zero_by_brute_force():
    """Delta(0.01 i) through sigma against a 400-digit pentagonal sum."""
    F = eta_power(12)
    with mpmath.workdps(400):
        ref = eta_pentagonal(mpmath.mpc(0, "0.01"), dps=400) ** 24
        ref = complex(ref)
    value = F(0.01j)
    assert abs(value - ref) <= 1e-8 * abs(ref)


def test_two_transformation_paths():
    F = eta_power(Fraction(53, 10))
    z = 0.05 + 0.05j
    via_sigma = F(z)
    gz = z / (z + 1)  # theta sigma theta
    via_tst = F(gz) / (F.multiplier(TST) * real_power(z + 1, F.w))
    assert abs(via_sigma - via_tst) <= 1e-8 * abs(via_sigma)


def test_cusp_offset_evaluation():
    F = eta_power(Fraction(53, 10))
    a = Cusp(-2, 5)
    delta = 1e-3 + 2e-2j
    direct = F(-0.4 + delta)
    assert abs(F.evaluate_at_cusp(a, delta) - direct) <= 1e-9 * abs(direct)


def test_tail_bound_error():
    F = CuspForm(12, M=3)
    with pytest.raises(TailBoundError):
        F.evaluate(0.5j)
    with pytest.raises(ValueError):
        F.evaluate(-1j)
    with pytest.raises(ValueError):
        CuspForm(-1)


def test_serialization():
    F = eta_power(Fraction(53, 10), 64)
    G = CuspForm.from_json(F.to_json())
    assert G == F and G.content_hash() == F.content_hash()
    bad = F.to_dict()
    bad["coefficients"][3] += 1
    with pytest.raises(ValueError):
        CuspForm.from_dict(bad)
    assert eta_power(12).content_hash() != eta_power(Fraction(53, 5)).content_hash()
