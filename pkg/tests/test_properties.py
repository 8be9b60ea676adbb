import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qint.fixtures import complex_plane, example7_A, example7_B, linear_a3
from qint.integrate import frakA, integrate_step
from qint.norms import BasisNormFn, PNormSpec
from qint.stepfn import Box, Domain, StepFunction, gamma_xi, gamma_xi_inverse, step_norm

ALGS = [example7_A(), example7_B(), complex_plane(), linear_a3()]
finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
I = Domain.cube(1)
B = example7_B()


def vec(n):
    return arrays(np.float64, n, elements=finite)


@st.composite
def alg_and_elems(draw, k=3):
    alg = draw(st.sampled_from(ALGS))
    return alg, [alg.element(draw(vec(alg.dim))) for _ in range(k)]


@st.composite
def step1d(draw):
    cuts = sorted(set(draw(st.lists(st.floats(0.001, 0.999), max_size=5))))
    bps = [0.0, *cuts, 1.0]
    pieces = []
    for i, (a, b) in enumerate(zip(bps, bps[1:])):
        if draw(st.booleans()):
            flag = "cc" if i == len(bps) - 2 else "co"
            pieces.append((Box.make(a, b, flag), draw(vec(B.dim))))
    return StepFunction.from_pieces(I, B, pieces)


@given(alg_and_elems())
def test_associative_and_distributive(data):
    alg, (x, y, z) = data
    scale = 1 + max(np.max(np.abs(v.coeffs)) for v in (x, y, z)) ** 3
    assert np.max(np.abs(((x * y) * z - x * (y * z)).coeffs)) <= 1e-12 * scale
    assert np.allclose((x * (y + z)).coeffs, (x * y + x * z).coeffs, atol=1e-9 * scale)
    assert (alg.one() * x).allclose(x, atol=0) and (x * alg.one()).allclose(x, atol=0)


@given(alg_and_elems(2), st.floats(1, 6), st.floats(-100, 100), st.data())
def test_norm_axioms(data, p, lam, d):
    alg, (x, y) = data
    w = d.draw(arrays(np.float64, alg.dim, elements=st.floats(0.01, 10)))
    spec = PNormSpec(p, BasisNormFn(alg, w))
    assert spec(x + y) <= spec(x) + spec(y) + 1e-12 * (1 + spec(x) + spec(y))
    assert abs(spec(lam * x) - abs(lam) * spec(x)) <= 1e-12 * (1 + abs(lam) * spec(x))
    assert (spec(x) == 0) == bool(np.all(x.coeffs == 0))


@given(step1d(), step1d(), st.lists(st.floats(0, 1), min_size=1, max_size=30))
def test_add_is_pointwise(f, g, xs):
    pts = np.array(xs + [0.0, 1.0] + list(f.lo[:, 0]) + list(g.hi[:, 0]))[:, None]
    h = f + g
    h.validate()
    assert np.allclose(h.evaluate_many(pts), f.evaluate_many(pts) + g.evaluate_many(pts), atol=1e-9)


@given(step1d(), step1d(), st.floats(-10, 10), st.floats(-10, 10))
def test_integral_linear_and_p1_norm_bounds_it(f, g, a, b):
    lhs = integrate_step(a * f + b * g).coeffs
    rhs = a * integrate_step(f).coeffs + b * integrate_step(g).coeffs
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.max(np.abs(rhs), initial=0)))
    spec = PNormSpec.unit(B, 1)
    assert spec(integrate_step(f)) <= step_norm(f, spec) * (1 + 1e-12) + 1e-12


@given(step1d(), step1d(), st.lists(st.floats(0, 1), max_size=20))
def test_gamma_round_trip(f, g, xs):
    h = gamma_xi([f, g])
    h.validate()
    back = gamma_xi_inverse(h)
    for orig, b in zip((f, g), back):
        # affine rescaling can move an endpoint by one ulp
        assert np.allclose(b.lo, orig.lo, rtol=0, atol=1e-12) and np.allclose(b.hi, orig.hi, rtol=0, atol=1e-12)
        assert np.array_equal(b.lc, orig.lc) and np.array_equal(b.hc, orig.hc)
        ends = np.concatenate([orig.lo[:, 0], orig.hi[:, 0]])
        pts = np.array([x for x in xs if np.all(np.abs(ends - x) > 1e-9)] + [0.5])[:, None]
        assert np.array_equal(b.evaluate_many(pts), orig.evaluate_many(pts))
    hends = np.concatenate([h.lo[:, 0], h.hi[:, 0]])
    for x in [0.0, 0.5, 1.0, *(x for x in xs if np.all(np.abs(hends - x) > 1e-9))]:
        expect = f(min(2 * x, 1.0)) if x < 0.5 else g(2 * x - 1)
        assert np.array_equal(h(x).coeffs, expect.coeffs)


@settings(max_examples=50)
@given(arrays(np.float64, (4, 3), elements=finite), arrays(np.float64, 4, elements=st.floats(0.01, 1)))
def test_frakA_is_convex_combination(bs, w):
    out = frakA(bs, w)
    lo, hi = bs.min(axis=0), bs.max(axis=0)
    tol = 1e-12 * (1 + np.abs(bs).max())
    assert np.all(out >= lo - tol) and np.all(out <= hi + tol)
