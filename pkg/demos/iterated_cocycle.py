"""
The cocycle of iterated periods
===============================

For a family of forms the generating series X = J_0^{i inf} and
Y = J_1^0 behave like the values at sigma and tau of a cocycle of
PSL(2, Z).  Here the relations are checked at depth 3 for Delta together
with eta^(10.6), and then the cocycle law is tested on random pairs.
"""
from fractions import Fraction

from dedekind_periods.cocycles import theorem_3_5_1_check, translate_path
from dedekind_periods.exact import INF, Cusp
from dedekind_periods.forms import eta_power
from dedekind_periods.iterated import FormFamily, transport
from dedekind_periods.modular import SIGMA, TAU
from dedekind_periods.ncseries import NCSeries, series_residual

family = FormFamily([eta_power(12), eta_power(Fraction(53, 10))])
t = 0.25 - 0.75j
X = transport(family, Cusp(0, 1), INF, t, 3)
Y = transport(family, Cusp(1, 1), Cusp(0, 1), t, 3)
one = NCSeries.one(2, 3)

# --- sigma has order 2 and tau order 3 in PSL(2, Z)
print("X . sigma X - 1  :", series_residual(X.series * translate_path(X, SIGMA).series, one))
tY = translate_path(Y, TAU)
t2Y = translate_path(Y, TAU @ TAU)
print("Y . tY . t2Y - 1 :", series_residual(Y.series * tY.series * t2Y.series, one))
print("tau X - Y        :", series_residual(translate_path(X, TAU).series, Y.series))

# %% the whole check as a report, 10 random pairs (g, h)
report = theorem_3_5_1_check(family, 3, t, tol=1e-6, pairs=10, seed=1)
print(report.render("pretty"))
