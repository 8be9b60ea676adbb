"""Randomized law suites behind ``qint laws``; each returns a LawReport of max residuals."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import TAU_ALG, kernel_basis
from .contexts import SigmaContext, context
from .fixtures import algebra_fixture
from .integrate import (
    LAW_TOL,
    algebra_module,
    check_H_laws,
    check_N_laws,
    daniell_suite,
    frakA,
    integrate_step,
    mutated_theta,
    operator_norm_check,
    step_module,
)
from .norms import BasisNormFn, PNormSpec, product_inflation, seminorm_sigma
from .report import Check, LawReport
from .rng import stream
from .stepfn import (
    gamma_xi,
    module_action,
    random_points,
    random_step_function,
    split_piece,
    step_norm,
)

NORM_SLACK = 1e-12

DEFAULT_CONTEXTS = {
    "norms": ["lebesgue", "complex-square", "path-square"],
    "bimodule": ["lebesgue", "complex-square", "path-square"],
    # the object axiom ||v|| <= mu needs ||1_B|| = 1, true for R and C with unit weights
    "hsquare": ["lebesgue", "complex-square"],
    "daniell": ["lebesgue", "complex-square", "path-square"],
    "opnorm": ["lebesgue", "complex-square", "path-square"],
}
DEFAULT_TRIALS = {"norms": 1000, "bimodule": 100, "hsquare": 100, "daniell": 100, "opnorm": 200}
SUITES = tuple(DEFAULT_CONTEXTS)
NORM_ALGEBRAS = ["real", "complex", "linear-A3", "example7-B", "example7-A"]


def _elem(rng, alg, scale=1.0):
    return alg.element(scale * rng.uniform(-1, 1, alg.dim))


# ---------------------------------------------------------------- norms


def norm_axioms(seed: int, trials: int = 1000, contexts: Sequence[str] = DEFAULT_CONTEXTS["norms"]) -> LawReport:
    rep = LawReport("norm axioms")
    algs = [algebra_fixture(n) for n in NORM_ALGEBRAS]
    for p in (1, 2, 3):
        rng = stream(seed, "norms", p)
        tri = hom = sep = 0.0
        for t in range(trials):
            alg = algs[t % len(algs)]
            w = np.ones(alg.dim) if t % 2 == 0 else rng.uniform(0.5, 2.0, alg.dim)
            spec = PNormSpec(p, BasisNormFn(alg, w))
            x = _elem(rng, alg, 10.0 ** rng.uniform(-2, 1))
            y = _elem(rng, alg, 10.0 ** rng.uniform(-2, 1))
            lam = float(rng.uniform(-5, 5))
            tri = max(tri, spec(x + y) - spec(x) - spec(y))
            hom = max(hom, abs(spec(lam * x) - abs(lam) * spec(x)))
            z = alg.zero() if t % 10 == 0 else x
            if spec(z) == 0:
                sep = max(sep, float(np.max(np.abs(z.coeffs))))
        rep.checks.append(Check(f"triangle_p{p}", max(tri, 0.0), NORM_SLACK))
        rep.checks.append(Check(f"homogeneity_p{p}", hom, NORM_SLACK))
        rep.checks.append(Check(f"separation_p{p}", sep, NORM_SLACK))

    for name in ("example7", "path-square", "bochner-2-3"):
        ctx = context(name)
        K = kernel_basis(ctx.sigma)
        worst = max((seminorm_sigma(ctx.sigma, ctx.norm, ctx.A.element(k)) for k in K), default=0.0)
        rep.checks.append(Check(f"seminorm_kernel[{name}]", worst, 10 * TAU_ALG, {"kernel_dim": len(K)}))

    rng = stream(seed, "norms", "step")
    tri = hom = refine = refine_int = 0.0
    ctxs = [context(c) for c in contexts]
    for t in range(trials):
        ctx = ctxs[t % len(ctxs)]
        f = random_step_function(rng, ctx.domain, ctx.B)
        g = random_step_function(rng, ctx.domain, ctx.B)
        lam = float(rng.uniform(-5, 5))
        n = lambda h: step_norm(h, ctx.norm)
        tri = max(tri, n(f + g) - n(f) - n(g))
        hom = max(hom, abs(n(lam * f) - abs(lam) * n(f)))
        h = f
        for _ in range(int(rng.integers(1, 6))):
            h = split_piece(h, int(rng.integers(len(h))), int(rng.integers(ctx.domain.dim)), float(rng.uniform(0.05, 0.95)))
        refine = max(refine, abs(n(h) - n(f)))
        refine_int = max(refine_int, ctx.norm(integrate_step(h) - integrate_step(f)))
    rep.checks.append(Check("step_triangle_p1", max(tri, 0.0), NORM_SLACK))
    rep.checks.append(Check("step_homogeneity_p1", hom, NORM_SLACK))
    rep.checks.append(Check("refinement_p1", refine, NORM_SLACK))
    rep.checks.append(Check("refinement_integral", refine_int, NORM_SLACK))
    return rep


# ---------------------------------------------------------------- bimodule


def _n2_check(ctx: SigmaContext, p: float, rng, trials: int) -> Check:
    spec = PNormSpec(p, ctx.norm.basis_norm)
    equality = ctx.B.dim == 1 or (ctx.B.name == "complex" and p == 2)
    C = product_inflation(spec)
    worst = 0.0
    for _ in range(trials):
        f = random_step_function(rng, ctx.domain, ctx.B)
        a, b = _elem(rng, ctx.A), _elem(rng, ctx.B)
        lhs = step_norm(module_action(a, f, b, ctx.sigma), spec)
        rhs = seminorm_sigma(ctx.sigma, spec, a) * step_norm(f, spec) * spec(b)
        if equality:
            r = abs(lhs - rhs) / max(1.0, rhs)
        else:
            r = max(0.0, lhs - C * C * rhs) / max(1.0, rhs)
        worst = max(worst, r)
    kind = "equality" if equality else f"bound C^2={C * C:g}"
    return Check(f"N2_p{p:g}[{ctx.name}]", worst, LAW_TOL, kind)


def bimodule_laws(seed: int, trials: int = 100, contexts: Sequence[str] = DEFAULT_CONTEXTS["bimodule"]) -> LawReport:
    rep = LawReport("bimodule laws")
    for name in contexts:
        ctx = context(name)
        rng = stream(seed, "bimodule", name)
        A, B, sig, dom = ctx.A, ctx.B, ctx.sigma, ctx.domain
        act = lambda a, f, b: module_action(a, f, b, sig)
        res = dict.fromkeys(
            ["M1_add_a", "M2_add_f", "M3_assoc_a", "M4_unit_a", "M5_scalar_a",
             "1M_add_b", "2M_add_f", "3M_assoc_b", "4M_unit_b", "5M_scalar_b",
             "compatible", "gamma_linear", "gamma_bimodule", "direct_sum_norm", "frakA_equivariant"],
            0.0,
        )
        arity = 2**dom.dim
        w = dom.subbox_measures()
        for _ in range(trials):
            f = random_step_function(rng, dom, B)
            g = random_step_function(rng, dom, B)
            a1, a2 = _elem(rng, A), _elem(rng, A)
            b1, b2 = _elem(rng, B), _elem(rng, B)
            lam = float(rng.uniform(-3, 3))
            pts = random_points(rng, dom, 48, f)

            def d(key, x, y):
                r = float(np.max(np.abs(x.evaluate_many(pts) - y.evaluate_many(pts))))
                res[key] = max(res[key], r)

            d("M1_add_a", act(a1 + a2, f, None), act(a1, f, None) + act(a2, f, None))
            d("M2_add_f", act(a1, f + g, None), act(a1, f, None) + act(a1, g, None))
            d("M3_assoc_a", act(a1 * a2, f, None), act(a1, act(a2, f, None), None))
            d("M4_unit_a", act(A.one(), f, None), f)
            d("M5_scalar_a", act(lam * a1, f, None), lam * act(a1, f, None))
            d("1M_add_b", act(None, f, b1 + b2), act(None, f, b1) + act(None, f, b2))
            d("2M_add_f", act(None, f + g, b1), act(None, f, b1) + act(None, g, b1))
            d("3M_assoc_b", act(None, f, b1 * b2), act(None, act(None, f, b1), b2))
            d("4M_unit_b", act(None, f, B.one()), f)
            d("5M_scalar_b", act(None, f, lam * b1), lam * act(None, f, b1))
            d("compatible", act(None, act(a1, f, None), b1), act(a1, act(None, f, b1), None))

            fs = [random_step_function(rng, dom, B) for _ in range(arity)]
            gs = [random_step_function(rng, dom, B) for _ in range(arity)]
            al, be = rng.uniform(-2, 2, 2)
            pts = random_points(rng, dom, 48, gamma_xi(fs))
            d("gamma_linear", gamma_xi([al * x + be * y for x, y in zip(fs, gs)]), al * gamma_xi(fs) + be * gamma_xi(gs))
            d("gamma_bimodule", gamma_xi([act(a1, x, b1) for x in fs]), act(a1, gamma_xi(fs), b1))
            for p in (1.0, 2.0):
                spec = PNormSpec(p, ctx.norm.basis_norm)
                direct = step_norm(gamma_xi(fs), spec)
                comps = np.array([step_norm(x, spec) for x in fs])
                weighted = float(np.sum(((w / ctx.mu) * comps) ** p) ** (1 / p))
                res["direct_sum_norm"] = max(res["direct_sum_norm"], abs(direct - weighted))

            bs = [_elem(rng, B) for _ in range(arity)]
            lhs = frakA([sig(a1) * x * b1 for x in bs], w, ctx.mu)
            rhs = sig(a1) * frakA(bs, w, ctx.mu) * b1
            res["frakA_equivariant"] = max(res["frakA_equivariant"], ctx.norm(lhs - rhs))
        for key, r in res.items():
            rep.checks.append(Check(f"{key}[{name}]", r, LAW_TOL))
        for p in (1.0, 2.0):
            rep.checks.append(_n2_check(ctx, p, rng, trials))
    return rep


# ---------------------------------------------------------------- category and integral laws


THETAS = {"integrate-step": lambda: integrate_step, "mutated-theta": mutated_theta}


def hsquare_laws(seed: int, trials: int = 100, contexts: Sequence[str] = DEFAULT_CONTEXTS["hsquare"], fixture: str = "integrate-step") -> LawReport:
    if fixture not in THETAS:
        raise ValueError(f"unknown morphism fixture {fixture!r}; known: {sorted(THETAS)}")
    theta = THETAS[fixture]()
    rep = LawReport(f"morphism square ({fixture})")
    for name in contexts:
        ctx = context(name)
        S, Bm = step_module(ctx), algebra_module(ctx)
        rep.extend(check_N_laws(S), f"[{name}] step:")
        rep.extend(check_N_laws(Bm), f"[{name}] algebra:")
        rep.extend(check_H_laws(S, Bm, theta, trials, stream(seed, "hsquare", name)), f"[{name}] ")
    return rep


def daniell_laws(seed: int, trials: int = 100, contexts: Sequence[str] = DEFAULT_CONTEXTS["daniell"], fixture: str = "shrink") -> LawReport:
    rep = LawReport(f"integral axioms ({fixture})")
    for name in contexts:
        rep.extend(daniell_suite(context(name), fixture, trials, stream(seed, "daniell", name)), f"[{name}] ")
    return rep


def opnorm_laws(seed: int, trials: int = 200, contexts: Sequence[str] = DEFAULT_CONTEXTS["opnorm"], u_max: int = 4) -> LawReport:
    rep = LawReport("operator norm")
    for name in contexts:
        rep.extend(operator_norm_check(context(name), u_max, trials, stream(seed, "opnorm", name)), f"[{name}] ")
    return rep


def run_suite(suite: str, seed: int = 0, trials: int | None = None, contexts: Sequence[str] | None = None, fixture: str | None = None) -> LawReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; known: {SUITES}")
    trials = DEFAULT_TRIALS[suite] if trials is None else trials
    contexts = list(contexts or DEFAULT_CONTEXTS[suite])
    if suite == "norms":
        return norm_axioms(seed, trials, contexts)
    if suite == "bimodule":
        return bimodule_laws(seed, trials, contexts)
    if suite == "hsquare":
        return hsquare_laws(seed, trials, contexts, fixture or "integrate-step")
    if suite == "daniell":
        return daniell_laws(seed, trials, contexts, fixture or "shrink")
    return opnorm_laws(seed, trials, contexts)
