"""
Empirical norming constants via linear programming
==================================================

R = max over y* in Y of max { Q(y*) : |Q| <= 1 on Z } measures how far a
degree-d polynomial bounded on Z can grow on Y.  The classical sharp case
is a Chebyshev value; the hyperbola shows the constant can blow up like
1/eps when Z sees only half the curve.
"""

import math

import numpy as np

from smoothparam import (classical_remez_bound, empirical_remez_constant,
                         hyperbola_curve, hyperbola_remez_query,
                         curve_gradient_floor)
from smoothparam.remez import normalize_curve, remez_parametrization

# -- classical: Y = [-1, 1], Z = [-1, 0], degree 2 ----------------------------

Y = [(float(v), 0.0) for v in np.linspace(-1, 1, 400)]
Z = [(float(v), 0.0) for v in np.linspace(-1, 0, 400)]
rep = empirical_remez_constant(Y, Z, 2)
exact = classical_remez_bound(2, 1)
print(f"classical d=2, Z=[-1,0]: LP gives {rep.R:.4f}, "
      f"sharp value T_2(3) = {exact}")

# -- hyperbola: the constant beats 1/eps --------------------------------------

for eps in (0.1, 0.01):
    Ye, Ze = hyperbola_remez_query(eps, 400)
    r = empirical_remez_constant(Ye, Ze, 2)
    print(f"hyperbola eps={eps}: R = {r.R:.2f}  (1/eps = {1 / eps:.0f}, "
          f"witness already given by Q = y/eps)")

# -- gradient floor and the chart-count law -----------------------------------

print("\nrho = min |grad| on the normalized curve, and chart counts:")
for j in (3, 6, 9, 12):
    eps = 2.0 ** -j
    res = remez_parametrization(hyperbola_curve(eps))
    print(f"  eps = 2^-{j:<2d}: rho = {res['rho']:.3e}, "
          f"log2(1/rho) = {math.log2(1 / res['rho']):5.2f}, "
          f"N = {res['N']} charts")
