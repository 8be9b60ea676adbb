"""Polynomial and trigonometric approximation measured in L1.

Truncated Taylor series of exp and Fourier partial sums of x on [0,1] are
compared with their targets by integrating |f - g| with the same engine.
The Fourier coefficients themselves are integrals computed at a fixed
refinement level.
"""

import math

from qint import convergence_report, fourier_coeffs
from qint import handles as H

rep = convergence_report("exp", "taylor", range(1, 9))
print("Taylor of exp          (remainder bound e/(N+2)!)")
for N, e in rep.rows():
    print(f"  order {N}: {e:.3e}   bound {math.e / math.factorial(N + 2):.3e}")

co = fourier_coeffs(H.coordinate(0), 3)
print("\nFourier coefficients of x: a0 = %.6f" % co[0][0])
for n in (1, 2, 3):
    print(f"  b{n} = {co[n][1]: .6f}   (closed form {-1 / (n * math.pi): .6f})")

rep = convergence_report("identity", "fourier", [1, 2, 4, 8, 16, 32, 64])
print("\nFourier partial sums of x, L1 error")
for N, e in rep.rows():
    print(f"  order {N:>2}: {e:.4f}")
print("weakly decreasing:", rep.weakly_decreasing)

# Taylor sums of cos(2 pi x) overshoot for small orders before converging.
rep = convergence_report("cos2pi", "taylor", [0, 2, 4, 8, 16, 24])
print("\nTaylor of cos(2 pi x):", ", ".join(f"{N}:{e:.2g}" for N, e in rep.rows()))
