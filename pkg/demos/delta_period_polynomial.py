"""
Moments and the period polynomial of Delta
==========================================

Delta = eta^24 has weight 12, so k = 10 and its period function

    P(t) = int_0^{i inf} Delta(z) (z - t)^10 dz

is a polynomial of degree 10 in t.  Its coefficients are the moments
m_s = int_0^{i inf} Delta(z) z^s dz.
"""
import math
from fractions import Fraction

from dedekind_periods.forms import eta_power
from dedekind_periods.quadrature import moment_integral, period_function

delta = eta_power(12)
print(delta, "first coefficients:", [int(c) for c in delta.coefficients[:6]])

# --- the eleven moments, each a single quadrature along the imaginary axis
m = [moment_integral(delta, s).value for s in range(11)]
for s, v in enumerate(m):
    print(f"m_{s:<2d} = {v.real:+.15e} {v.imag:+.15e}i")

# %% m_s is purely imaginary for even s and real for odd s; the pairs
# m_s, m_{10-s} agree up to sign
for s in range(6):
    print(s, 10 - s, m[10 - s] / m[s])

# %% ratios within each parity class come out rational
for s in (2, 4):
    r = abs(m[s] / m[0])
    frac = Fraction(r).limit_denominator(10000)
    print(f"|m_{s} / m_0| = {r:.15f} ~ {frac}  (off by {abs(r - frac):.1e})")
for s in (3, 5):
    r = abs(m[s] / m[1])
    frac = Fraction(r).limit_denominator(10000)
    print(f"|m_{s} / m_1| = {r:.15f} ~ {frac}  (off by {abs(r - frac):.1e})")

# --- the polynomial rebuilt from moments against direct quadrature
for t in (-1j, 0.5 - 0.25j, 2.0, -0.5):
    poly = sum(math.comb(10, s) * (-t) ** (10 - s) * m[s] for s in range(11))
    direct = period_function(delta, t).value
    print(f"t = {t}:  |poly - direct| / |direct| = {abs(poly - direct) / abs(direct):.1e}")
