"""
Rational points on curves and the hypersurface cover
====================================================

enumerate_points finds all (x, f(x)) whose coordinates become integers
after dilation by t -- exactly, over Q.  The ball-cover argument then puts
those points on very few low-degree curves.
"""

from fractions import Fraction as F

from smoothparam import (brute_force_points, enumerate_points,
                         hypersurface_cover)
from smoothparam.bp import bp_for_degree
from smoothparam.funcs import RationalExpr
from smoothparam.poly import Poly

cubic = RationalExpr(Poly([0, 0, 0, 1]))    # y = x^3 on [-1, 1]

# -- enumeration vs the independent brute-force oracle ------------------------

print("t : points on y = x^3 with x, y in (1/t)Z")
for t in (10, 50, 100, 144, 200):
    pts = enumerate_points(cubic, (F(-1), F(1)), t)
    ref = brute_force_points(cubic, (F(-1), F(1)), t)
    assert set(pts) == set(ref)
    print(f"  t={t:<3d}: {len(pts)} points "
          f"{sorted((str(x), str(y)) for x, y in pts) if len(pts) < 6 else ''}")

# -- the cover: every ball's points on one degree-2 curve ---------------------

cov = hypersurface_cover(cubic, (F(-1), F(1)), 100, 2)
print(f"\ncover at t=100, d=2: ball radius {cov['rtil']:.3e}, "
      f"{cov['ball_count']} balls, {cov['occupied_balls']} occupied, "
      f"{cov['hypersurface_count']} hypersurfaces")

# -- the exponent table: eps(psi, d) strictly decreasing ----------------------

print("\nd : epsilon exponent (printed variant)")
for d in range(1, 7):
    c = bp_for_degree(1, 2, d)
    e = c.epsilon_exponent("as_printed")
    print(f"  d={d}: {e} = {float(e):.4f}")
