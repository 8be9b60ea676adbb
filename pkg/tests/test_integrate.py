import math
import time

import numpy as np
import pytest

from qint import errors as E
from qint import handles as H
from qint.contexts import bochner_context, context, integrand, lebesgue_context
from qint.fixtures import real_line
from qint.integrate import (
    algebra_module,
    bochner_integrate,
    check_H_laws,
    check_N_laws,
    daniell_suite,
    default_u_max,
    frakA,
    integrate_limit,
    integrate_step,
    lebesgue_integrate,
    mutated_theta,
    operator_norm_check,
    shrink_sequence,
    step_module,
    scalarize,
    unit_split,
)
from qint.stepfn import Box, Domain, StepFunction, gamma_xi, random_step_function, split_piece

R = real_line()


# ---------------------------------------------------------------- averaging operator


def test_frakA_examples(rng):
    ctx = context("path-square")
    B, w, mu = ctx.B, ctx.domain.subbox_measures(), ctx.mu
    v = B.element(rng.normal(size=B.dim))
    assert frakA([v] * 4, w, mu).allclose(v, atol=1e-15)
    assert frakA([mu * B.one()] * 4, w, mu).allclose(mu * B.one(), atol=1e-15)
    half = Domain.cube(1).subbox_measures()
    assert frakA([R.element([3.0]), R.element([8.0])], half).coeffs[0] == 5.5


def test_frakA_matches_weighted_sum(rng):
    w = np.array([0.1, 0.2, 0.3, 0.4])
    bs = rng.normal(size=(4, 3))
    assert np.allclose(frakA(bs, w), w @ bs, atol=1e-15)


def test_frakA_errors():
    with pytest.raises(E.ArityMismatch):
        frakA(np.ones((3, 1)), [1, 1, 1])
    with pytest.raises(E.ArityMismatch):
        frakA(np.ones((2, 1)), [1, 1, 1, 1])
    with pytest.raises(E.BadWeights):
        frakA(np.ones((2, 1)), [0.5, 0.4], total=1.0)
    with pytest.raises(E.BadWeights):
        frakA(np.ones((2, 1)), [1.5, -0.5])


def test_frakA_equivariant(rng):
    ctx = context("path-square")
    A, B, s, w = ctx.A, ctx.B, ctx.sigma, ctx.domain.subbox_measures()
    for _ in range(200):
        bs = [B.element(rng.normal(size=B.dim)) for _ in range(4)]
        a, b = A.element(rng.normal(size=A.dim)), B.element(rng.normal(size=B.dim))
        lhs = frakA([s(a) * x * b for x in bs], w, ctx.mu)
        rhs = s(a) * frakA(bs, w, ctx.mu) * b
        assert ctx.norm(lhs - rhs) <= 1e-9


# ---------------------------------------------------------------- T on step functions


def test_integrate_step_examples():
    ctx = context("path-square")
    assert integrate_step(StepFunction.constant(ctx.domain, ctx.B.one())).allclose(4.0 * ctx.B.one(), atol=0)
    I = Domain.cube(1)
    f = StepFunction.from_pieces(I, R, [(Box.make(0, 0.5, "co"), [2.0]), (Box.make(0.5, 1, "cc"), [4.0])])
    assert integrate_step(f).coeffs[0] == 3.0
    assert integrate_step(StepFunction.zero(I, R)).allclose(R.zero(), atol=0)


def test_integrate_step_split_invariance(rng):
    names = ["lebesgue", "complex-square", "path-square"]
    for t in range(500):
        ctx = context(names[t % 3])
        f = random_step_function(rng, ctx.domain, ctx.B)
        g = f
        for _ in range(int(rng.integers(1, 8))):
            g = split_piece(g, int(rng.integers(len(g))), int(rng.integers(ctx.domain.dim)), float(rng.uniform(0.01, 0.99)))
        assert ctx.norm(integrate_step(g) - integrate_step(f)) <= 1e-12


def test_commuting_square_by_hand(rng):
    for name in ("lebesgue", "complex-square", "path-square"):
        ctx = context(name)
        w = ctx.domain.subbox_measures()
        for _ in range(30):
            fs = [random_step_function(rng, ctx.domain, ctx.B) for _ in w]
            lhs = integrate_step(gamma_xi(fs)).coeffs
            # pieces land in sub-boxes scaled by mu_sigma / mu
            rhs = sum((wi / ctx.mu) * integrate_step(f).coeffs for wi, f in zip(w, fs))
            assert np.max(np.abs(lhs - rhs)) <= 1e-9


# ---------------------------------------------------------------- refinement limits


def test_example7_integral():
    ctx, h = integrand("example7")
    t0 = time.perf_counter()
    rep = integrate_limit(h, ctx, rule="midpoint", level=1)
    assert time.perf_counter() - t0 < 10
    expect = {l: (0.5 if l in ("e1", "e2", "e3", "a", "b", "c") else 0.0) for l in ctx.B.labels}
    assert rep.value.to_dict() == pytest.approx(expect, abs=1e-9)
    assert rep.exact and rep.converged and rep.levels == [1] and rep.cells == 2048


def test_constant_converges_at_level0():
    ctx, h = integrand("constant-one")
    rep = integrate_limit(h, ctx)
    assert rep.levels == [0] and rep.exact
    assert rep.value.allclose(4.0 * ctx.B.one(), atol=1e-15)


def test_affine_exact_at_level1(rng):
    ctx = context("complex-square")
    h = H.affine(rng.normal(size=2), rng.normal(size=(2, 2)), ctx.B)
    one = integrate_limit(h, ctx, level=1).value.coeffs
    deep = integrate_limit(h, ctx, level=6).value.coeffs
    assert np.allclose(one, deep, atol=1e-13)


def test_x_squared_and_trace():
    ctx, h = integrand("lebesgue-x2")
    rep = integrate_limit(h, ctx, tol=1e-3, u_max=12)
    assert rep.converged and abs(rep.value.coeffs[0] - 1 / 3) <= 1e-3
    assert len(rep.deltas) == len(rep.levels) - 1
    # midpoint error for x^2 at level u is exactly 4^-u / 12
    for u, v in zip(rep.levels, rep.values):
        assert v[0] == pytest.approx(1 / 3 - 4.0**-u / 12, abs=1e-15)


def test_unconverged_report():
    ctx, h = integrand("lebesgue-exp")
    rep = integrate_limit(h, ctx, tol=1e-12, u_max=3)
    assert not rep.converged and rep.levels == [0, 1, 2, 3]


def test_corner_rule_differs_but_converges():
    ctx, h = integrand("lebesgue-x")
    c = integrate_limit(h, ctx, rule="corner", level=4)
    m = integrate_limit(h, ctx, rule="midpoint", level=4)
    assert c.value.coeffs[0] == 0.5 - 2.0**-5
    assert m.value.coeffs[0] == 0.5


def test_integrate_limit_argument_checks():
    ctx, h = integrand("lebesgue-x")
    with pytest.raises(ValueError):
        integrate_limit(h, ctx, tol=0)
    with pytest.raises(ValueError):
        integrate_limit(h, ctx, rule="simpson")
    with pytest.raises(E.BudgetExceeded):
        integrate_limit(H.exp(), ctx, level=30)


def test_default_u_max():
    assert default_u_max(11) == 2
    assert default_u_max(1) == 20
    assert default_u_max(2, budget=1 << 10) == 5


def test_lebesgue_examples():
    assert abs(lebesgue_integrate(H.coordinate(0), tol=1e-3, u_max=12) - 0.5) <= 1e-3
    assert lebesgue_integrate(H.constant(1.0), u_max=0) == 1.0
    assert abs(lebesgue_integrate(H.exp(), tol=1e-6) - (math.e - 1)) <= 1e-3
    assert lebesgue_integrate(lambda x: x, c=1.0, d=3.0, u_max=3) == pytest.approx(4.0)


def test_bochner_examples():
    ctx, h = integrand("bochner-xy1")
    assert np.allclose(bochner_integrate(h, 2, 3, tol=1e-3, u_max=12), [0.5, 0.5, 1.0], atol=1e-3)
    assert np.all(bochner_integrate(integrand("bochner-zero")[1], 2, 3) == 0.0)
    trig = integrand("bochner-trig")[1]
    assert np.allclose(bochner_integrate(trig, 1, 2, tol=1e-6), [0.0, 0.0], atol=1e-3)


def test_bochner_is_componentwise(rng):
    ctx = bochner_context(2, 3)
    c = rng.normal(size=3)
    h = H.from_callable(lambda x: np.outer(x[:, 0] * x[:, 1] ** 2, c), ctx.B)
    got = bochner_integrate(h, 2, 3, tol=1e-8)
    assert np.allclose(got, c / 6, atol=1e-6)


# ---------------------------------------------------------------- morphism laws


@pytest.mark.parametrize("name", ["lebesgue", "complex-square"])
def test_shipped_morphism_passes(name):
    ctx = context(name)
    S, Bm = step_module(ctx), algebra_module(ctx)
    assert check_N_laws(S).ok and check_N_laws(Bm).ok
    rep = check_H_laws(S, Bm, integrate_step, 100, np.random.default_rng(7))
    assert rep.ok, rep.summary()
    assert integrate_step(S.v).allclose(Bm.v, atol=1e-15)


def test_mutated_theta_flagged():
    ctx = context("complex-square")
    rep = check_H_laws(step_module(ctx), algebra_module(ctx), mutated_theta(), 10, np.random.default_rng(0))
    assert not rep.ok
    assert rep["H1_unit"].residual == pytest.approx(0.01 * ctx.mu * ctx.norm(ctx.B.one()))


def test_unit_norm_exceeds_mu_for_path_algebra():
    # with unit basis weights the unit of a three-vertex path algebra has norm 3
    ctx = context("path-square")
    rep = check_N_laws(step_module(ctx))
    assert not rep["N2_norm_of_v"].passed
    assert rep["N3_delta_fixes_v"].passed


# ---------------------------------------------------------------- integral axioms


@pytest.mark.parametrize("name", ["lebesgue", "complex-square", "path-square"])
def test_daniell_suite_passes(name):
    rep = daniell_suite(context(name), trials=100, rng=np.random.default_rng(3))
    assert rep.ok, rep.summary()


def test_shrink_sequence_closed_form():
    ctx = lebesgue_context()
    b = R.element([1.0])
    norms = [abs(integrate_step(shrink_sequence(ctx, b, t)).coeffs[0]) for t in range(21)]
    assert norms == [2.0**-t for t in range(21)]
    assert norms[20] < 1e-6


def test_positivity_constant_example(rng):
    ctx = context("path-square")
    b = ctx.B.element(rng.normal(size=ctx.B.dim))
    out = integrate_step(scalarize(StepFunction.constant(ctx.domain, b), ctx))
    omega, rest = unit_split(out)
    assert rest == 0.0
    assert omega == pytest.approx(ctx.norm(b) * ctx.mu)


# ---------------------------------------------------------------- operator norm


@pytest.mark.parametrize("name", ["lebesgue", "complex-square", "path-square"])
def test_operator_norm(name):
    ctx = context(name)
    rep = operator_norm_check(ctx, u_max=4, trials=100, rng=np.random.default_rng(5))
    assert rep.ok, rep.summary()
    assert rep["u0_witness"].residual == pytest.approx(ctx.mu, rel=1e-15)


def test_operator_norm_unit_measure():
    rep = operator_norm_check(lebesgue_context(), u_max=3, trials=50)
    for u in range(4):
        assert rep[f"u{u}_upper"].tol == pytest.approx(1.0 + 1e-9)


def test_operator_norm_needs_p1():
    from qint.contexts import make_context

    c = lebesgue_context()
    with pytest.raises(ValueError):
        operator_norm_check(make_context("p2", c.A, c.B, c.sigma, c.domain, 2.0))
