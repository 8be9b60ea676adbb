"""Real and vector-valued integrals as special cases.

With A = B = R and sigma the identity, the refinement limit is the
ordinary integral on an interval.  With sigma the zero map from R^n to
R^m it is the integral of an R^m-valued function over the n-cube.
"""

import math

import numpy as np

from qint import bochner_integrate, integrate_limit, lebesgue_integrate
from qint import handles as H
from qint.contexts import bochner_context, integrand, lebesgue_context

print("int_0^1 x dx   =", lebesgue_integrate(H.coordinate(0), tol=1e-3))
print("int_0^1 e^x dx =", lebesgue_integrate(H.exp(), tol=1e-9), " exact", math.e - 1)
print("int_1^3 x dx   =", lebesgue_integrate(H.coordinate(0), c=1.0, d=3.0))

# The level trace shows midpoint error shrinking by 4 per level for x^2.
ctx, x2 = integrand("lebesgue-x2")
rep = integrate_limit(x2, ctx, tol=1e-8)
print("\nlevel  value              error")
for u, v in zip(rep.levels, rep.values):
    print(f"{u:>5}  {v[0]:.15f}  {abs(v[0] - 1 / 3):.2e}")
print("converged:", rep.converged)

# Corner sampling is first-order: doubling the cells only halves the error.
lc = lebesgue_context()
for rule in ("midpoint", "corner"):
    vals = [integrate_limit(H.exp(), lc, rule=rule, level=u).value.coeffs[0] for u in (4, 5, 6)]
    print(f"{rule:>8}: errors", ["%.2e" % abs(v - (math.e - 1)) for v in vals])

print("\nBochner (x, y, 1) over [0,1]^2:", bochner_integrate(integrand("bochner-xy1")[1], 2, 3, tol=1e-3))
trig = H.stack([H.sin(1.0), H.cos(1.0)], bochner_context(1, 2).B)
print("Bochner (sin 2pi x, cos 2pi x): ", np.round(bochner_integrate(trig, 1, 2), 12))
