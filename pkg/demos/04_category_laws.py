"""Step functions, juxtaposition and the laws the integral satisfies.

Algebra-valued step functions form a bimodule; juxtaposition glues 2^d of
them into the sub-boxes cut at xi.  Integration of step functions sends
the constant unit function to mu * 1_B and turns juxtaposition into the
measure-weighted average.  The randomized suites below check this along
with linearity, positivity, monotone limits and the operator norm.  A
deliberately scaled integral shows that the checks can fail.
"""

from qint import Box, Domain, StepFunction, gamma_xi, gamma_xi_inverse, integrate_step
from qint.fixtures import real_line
from qint.laws import run_suite

R = real_line()
D = Domain.cube(2)

quads = [StepFunction.constant(D, R.element([v])) for v in (1.0, 2.0, 3.0, 4.0)]
g = gamma_xi(quads)
print("quadrant values at (0.1,0.1), (0.1,0.9), (0.9,0.1), (0.9,0.9):")
print("  ", [float(g([x, y]).coeffs[0]) for x, y in [(0.1, 0.1), (0.1, 0.9), (0.9, 0.1), (0.9, 0.9)]])
print("integral of the glued function:", integrate_step(g).coeffs[0], "= average of 1..4")
print("inverse recovers:", [float(f.coeffs[0, 0]) for f in gamma_xi_inverse(g)])

# Pieces are disjoint half-open boxes; adding functions re-partitions them.
I = Domain.cube(1)
f = StepFunction.from_pieces(I, R, [(Box.make(0, 2 / 3, "co"), [1.0])])
h = StepFunction.from_pieces(I, R, [(Box.make(1 / 3, 1, "cc"), [10.0])])
print("\nf + h pieces:", [(round(float(b.lo[0]), 3), round(float(b.hi[0]), 3), float(v.coeffs[0])) for b, v in (f + h).pieces])

print()
for suite, kw in [
    ("norms", dict(trials=200)),
    ("bimodule", dict(trials=20)),
    ("hsquare", dict(trials=50)),
    ("daniell", dict(trials=50)),
    ("opnorm", dict(trials=50)),
    ("hsquare", dict(trials=10, fixture="mutated-theta")),
]:
    rep = run_suite(suite, seed=7, **kw)
    tag = f"{suite}({kw.get('fixture', '')})" if "fixture" in kw else suite
    status = "ok" if rep.ok else f"{len(rep.violations)} violations, e.g. {rep.violations[0].name}"
    print(f"{tag:>24}: {len(rep.checks):3d} checks, {status}")
