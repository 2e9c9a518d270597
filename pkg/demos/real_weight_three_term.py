"""
A three-term relation in real weight
====================================

eta^(10.6) has weight 5.3 and a multiplier with v(sigma)^2 != 1.  The
first-order reciprocity values

    f(p, q) = p^k I_0^{i inf}(omega; q/p),   k = 3.3,

satisfy f(p, q) = v(theta)^-1 f(p, q + p) + v(theta sigma theta)^-1 f(q + p, q),
and the full generating series satisfy the multiplicative version.
"""
import math
from fractions import Fraction

from dedekind_periods.forms import eta_power
from dedekind_periods.iterated import FormFamily
from dedekind_periods.modular import SIGMA, THETA
from dedekind_periods.ncseries import word_str
from dedekind_periods.reciprocity import f_direct, residual_eq_3_1, residual_eq_3_8, three_term_steps

eta106 = eta_power(Fraction(53, 10))
print("v(sigma) =", eta106.multiplier(SIGMA), " v(sigma)^2 =", eta106.multiplier(SIGMA) ** 2)
print("v(theta) =", eta106.multiplier(THETA))

single = FormFamily([eta106])

# --- every intermediate step, each integral a separate quadrature
for name, r in three_term_steps(single, 0, 2, 3).items():
    print(f"{name:>9s}: {r:.1e}")

# %% the scalar relation over a small grid
grid = [(p, q) for p in range(1, 5) for q in range(1, 5) if math.gcd(p, q) == 1]
print("worst scalar residual:", max(residual_eq_3_8(single, 0, p, q) for p, q in grid))

# --- two forms, generating series to depth 3
pair = FormFamily([eta_power(12), eta106])
v = f_direct(pair, 2, 3, 3)
for w in v.value.words():
    if len(w) <= 2:
        c = v[w]
        print(f"{word_str(w):>8s}  {c.real:+.6e} {c.imag:+.6e}i")

for p, q in [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2)]:
    print(f"(p, q) = ({p}, {q}): series residual {residual_eq_3_1(pair, p, q, 3):.1e}")
