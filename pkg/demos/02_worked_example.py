"""The 11-dimensional algebra A, its 6-dimensional quotient-like target B
and the projection sigma between them, integrated over the unit 11-cube.

A lives on a three-vertex quiver with loops x1, x2 squaring to minus the
vertex idempotents and doubled arrows a/a', b/b', c/c'.  sigma keeps the
six basis paths shared with B and kills the rest.  Reading a point of
[0,1]^11 as an element of A and pushing it through sigma gives an affine
integrand; midpoint sampling integrates it exactly, so one refinement
level already returns half of 1_B + a + b + c.
"""

from qint import integrate_limit, kernel_basis, verify_algebra, verify_hom
from qint.contexts import integrand

ctx, h = integrand("example7")
A, B, sigma = ctx.A, ctx.B, ctx.sigma
print("A basis:", A.labels)
print("B basis:", B.labels)
print("A valid:", verify_algebra(A).ok, " B valid:", verify_algebra(B).ok)

x1, a = A.basis("x1"), A.basis("a")
print("x1 * (x1 * a) =", (x1 * (x1 * a)).to_dict(drop_zeros=True))
print("sigma(x1) =", sigma(x1).to_dict(drop_zeros=True) or 0, "  sigma(a) =", sigma(a).to_dict(drop_zeros=True))
print("kernel of sigma has dimension", len(kernel_basis(sigma)))

rep = integrate_limit(h, ctx, rule="midpoint", level=1)
print(f"\nintegral at level 1 over {rep.cells} cells:")
for label, v in rep.value.to_dict().items():
    print(f"  {label:>3}: {v:.12f}")

# sigma is unital but not multiplicative: x1*x1 = -e1 while sigma(x1)^2 = 0.
# Any multiplicative map killing x1 would have to kill e1 and then the unit.
rep_h = verify_hom(sigma)
m = rep_h["multiplicative"]
print(f"\nsigma unital: {rep_h['unital'].passed}; multiplicative residual {m.residual:g} at {m.witness}")
