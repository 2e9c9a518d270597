import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dedekind_periods.forms import eta_power
from dedekind_periods.modular import IDENTITY, SIGMA, TAU, THETA, random_matrix
from dedekind_periods.multipliers import (
    EtaPowerMultiplier,
    automorphy_factor,
    cocycle_residual,
    lower_factor,
    real_power,
    slash_lower,
    weight_action,
)

TST = THETA @ SIGMA @ THETA
WEIGHTS = [Fraction(1, 2), Fraction(53, 10), Fraction(53, 5), 12, 0.73]


def test_real_power_branches():
    assert real_power(-1, 2) == pytest.approx(1)
    assert real_power(-1, 0.5, "upper") == pytest.approx(1j)
    assert real_power(-1, 0.5, "lower") == pytest.approx(-1j)
    assert real_power(1j, 1) == pytest.approx(1j)
    with pytest.raises(ValueError):
        real_power(2, 0.5, "left")


@pytest.mark.parametrize("w", WEIGHTS)
def test_generator_values(w):
    v = EtaPowerMultiplier(w)
    x = float(w)
    assert abs(v(SIGMA) - cmath.exp(-1j * math.pi * x / 2)) < 1e-12
    assert abs(v(THETA) - cmath.exp(1j * math.pi * x / 6)) < 1e-12
    assert abs(v(TST) - cmath.exp(-1j * math.pi * x / 6)) < 1e-12
    assert abs(v(TST) - v(THETA) * v(SIGMA) * v(THETA)) < 1e-12


def test_integer_weight_is_a_character():
    v = EtaPowerMultiplier(12)
    for g in (SIGMA, THETA, TAU, TST):
        assert v(g) == pytest.approx(1)


def test_cocycle_trivial_and_named():
    v = EtaPowerMultiplier(12)
    assert cocycle_residual(v, 12, IDENTITY, IDENTITY, 1j) == 0
    assert cocycle_residual(v, 12, SIGMA, THETA, 2j) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(WEIGHTS), st.integers(0, 2**32), st.floats(-3, 3), st.floats(0.01, 3))
def test_cocycle_identity(w, seed, x, y):
    rng = random.Random(seed)
    g, h = random_matrix(rng, 6), random_matrix(rng, 6)
    assert cocycle_residual(EtaPowerMultiplier(w), w, g, h, complex(x, y)) < 1e-10


@pytest.mark.parametrize("w", [Fraction(1, 2), Fraction(53, 10), 12])
def test_forms_are_invariant(w):
    F = eta_power(w)
    rng = random.Random(1)
    for g in (SIGMA, THETA, TAU, TST):
        G = weight_action(F, F.multiplier, w, g, "plus")
        for _ in range(5):
            z = complex(rng.uniform(-1, 1), rng.uniform(0.3, 1.5))
            assert abs(G(z) - F(z)) <= 1e-10 * abs(F(z))


def test_right_action_law():
    """P|(gh) = (P|g)|h for a function on the lower half-plane."""
    w = Fraction(53, 10)
    v = EtaPowerMultiplier(w)
    k = float(w)
    P = lambda t: np.exp(0.3j * t) / (t - 2j)
    rng = random.Random(3)
    for _ in range(20):
        g, h = random_matrix(rng, 4), random_matrix(rng, 4)
        t = complex(rng.uniform(-2, 2), -rng.uniform(0.1, 2))
        lhs = slash_lower(P, v, k, g @ h)(t)
        rhs = slash_lower(slash_lower(P, v, k, g), v, k, h)(t)
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


def test_identity_action():
    F = eta_power(12)
    G = weight_action(F, F.multiplier, 12, IDENTITY)
    assert G(0.1 + 1j) == F(0.1 + 1j)


def test_lower_factor_real_boundary():
    # limit from below of (c t + d)^k
    k = 0.5
    t = -2.0
    for g in (SIGMA, -SIGMA, TAU, -TAU):
        approx = real_power(g.c * complex(t, -1e-12) + g.d, k, "upper")
        assert abs(lower_factor(g, t, k) - approx) < 1e-9
