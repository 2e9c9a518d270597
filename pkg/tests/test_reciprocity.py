from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dedekind_periods.forms import eta_power
from dedekind_periods.iterated import FormFamily
from dedekind_periods.ncseries import NCSeries
from dedekind_periods.reciprocity import (
    double_extension_residual,
    f_direct,
    f_extended,
    f_scalar,
    f_scalar_boundary,
    f_value,
    grid_pairs,
    inverse_path_residual,
    residual_eq_3_1,
    residual_eq_3_8,
    residual_records,
    scalar_three_term_checks,
    sigma_scalar_residual,
    three_term_steps,
)
from oracles import delta_homogeneous, delta_period


def test_constant_term(fam_pair):
    v = f_direct(fam_pair, 2, 3, 2)
    assert v[()] == 1 and v.provenance == "direct" and not v.degenerate


@pytest.mark.parametrize("p,q", [(1, 2), (2, 1), (3, 5), (5, 2)])
def test_first_order_delta_oracle(fam_delta, p, q):
    v = f_direct(fam_delta, p, q, 1)[(0,)]
    ref = delta_homogeneous(p, q)
    assert abs(v - ref) <= 1e-9 * abs(ref)


def test_period_polynomial_value(fam_delta):
    ref = delta_period(2.0)
    assert abs(f_direct(fam_delta, 1, 2, 1)[(0,)] - ref) <= 1e-9 * abs(ref)


def test_degenerate_pair_flagged(fam_delta):
    v = f_direct(fam_delta, 1, 0, 1)
    assert v.degenerate
    ref = delta_homogeneous(1, 0)
    assert abs(v[(0,)] - ref) <= 1e-8 * abs(ref)


def test_pair_validation(fam_delta):
    with pytest.raises(ValueError):
        f_direct(fam_delta, 2, 4, 1)
    with pytest.raises(ValueError):
        f_direct(fam_delta, 2, -1, 1)
    with pytest.raises(ValueError):
        f_extended(fam_delta, 2, 1, 1)
    with pytest.raises(ValueError):
        f_value(fam_delta, 0, 1, 1)
    with pytest.raises(ValueError):
        f_extended(fam_delta, 1, -1, 1, convention="other")


def test_scalar_matches_series(fam_pair):
    for j in range(2):
        s = f_scalar(fam_pair, j, 3, 2).value
        assert abs(s - f_direct(fam_pair, 3, 2, 1)[(j,)]) <= 1e-9 * abs(s)


def test_sign_symmetry(fam_pair):
    a = f_value(fam_pair, -2, -3, 2).value
    b = f_value(fam_pair, 2, 3, 2).value
    assert a == b


def test_extension_conventions(fam_pair):
    lit = f_extended(fam_pair, 2, -3, 2)
    bnd = f_extended(fam_pair, 2, -3, 2, convention="boundary")
    # v(sigma) = 1 for Delta, so both readings agree there
    assert abs(lit[(0,)] - bnd[(0,)]) <= 1e-12 * abs(lit[(0,)])
    assert abs(lit[(1,)] - bnd[(1,)]) > 1
    # only the boundary reading reproduces the integral at real t < 0
    for j in range(2):
        ref = f_scalar_boundary(fam_pair, j, 2, -3)
        assert abs(bnd[(j,)] - ref) <= 1e-9 * abs(ref)


@pytest.mark.parametrize("p,q", grid_pairs(3))
def test_sigma_scalar(fam_pair, p, q):
    for j in range(2):
        assert sigma_scalar_residual(fam_pair, j, p, -q) < 1e-8


def test_double_extension(fam_pair):
    for q in (1, 2, 3):
        assert double_extension_residual(fam_pair, 1, -q, 3) < 1e-8


def test_inverse_path(fam_pair):
    assert inverse_path_residual(fam_pair, -1j, 3) < 1e-8
    assert inverse_path_residual(fam_pair, 0.25 - 0.5j, 3) < 1e-8


def test_three_term_steps(fam_pair):
    for j in range(2):
        steps = three_term_steps(fam_pair, j, 2, 3)
        assert set(steps) == {"split", "theta", "tst", "combined", "rational", "scaled"}
        assert max(steps.values()) < 1e-10


def test_scalar_three_term_examples(fam_pair):
    assert residual_eq_3_8(fam_pair, 0, 1, 1) < 1e-8
    assert residual_eq_3_8(fam_pair, 1, 3, 2) < 1e-7
    with pytest.raises(ValueError):
        residual_eq_3_8(fam_pair, 0, 1, -1)


def test_scalar_three_term_grid(fam_pair):
    checks = scalar_three_term_checks(fam_pair, 5, 1e-7)
    assert len(checks) == 2 * len(grid_pairs(5))
    assert all(c.passed for c in checks)
    rows = residual_records(checks)
    assert set(rows[0]) == {"p", "q", "depth", "equation", "residual", "tolerance", "pass"}


def test_series_three_term(fam_delta, fam_pair):
    assert residual_eq_3_1(fam_delta, 2, 1, 3) < 1e-6
    assert residual_eq_3_1(fam_pair, 1, 1, 2) < 1e-6
    assert residual_eq_3_1(fam_pair, 2, 3, 3) < 1e-6
    with pytest.raises(ValueError):
        residual_eq_3_1(fam_pair, 1, 0, 2)


def test_trivial_family():
    empty = FormFamily([])
    assert f_direct(empty, 2, 3, 3).value == NCSeries.one(0, 3)
    assert residual_eq_3_1(empty, 2, 3, 3) == 0


def test_weight_two_edge():
    fam = FormFamily([eta_power(2)])
    assert fam.forms[0].k == 0
    assert residual_eq_3_8(fam, 0, 2, 3) < 1e-10
    assert residual_eq_3_1(fam, 2, 3, 3) < 1e-8
    # k = 0: no p-scaling at all
    v = f_direct(fam, 3, 2, 1)[(0,)]
    assert abs(v - f_scalar(fam, 0, 3, 2).value) <= 1e-10 * abs(v)


@settings(max_examples=15)
@given(st.integers(1, 6), st.integers(1, 6))
def test_first_order_scaling(p, q):
    from math import gcd
    if gcd(p, q) != 1:
        return
    fam = FormFamily([eta_power(Fraction(53, 10))])
    a = f_direct(fam, p, q, 1)[(0,)]
    b = f_scalar(fam, 0, p, q).value
    assert abs(a - b) <= 1e-9 * max(abs(a), 1e-300)


def test_to_dict(fam_pair):
    d = f_value(fam_pair, 1, -2, 1).to_dict()
    assert d["provenance"] == "extended" and d["p"] == 1 and d["q"] == -2
