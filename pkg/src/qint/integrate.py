"""Averaging, step-function integration, refinement limits and the law checkers built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import AlgebraElement
from .contexts import SigmaContext, bochner_context, lebesgue_context
from .errors import ArityMismatch, BadWeights
from .handles import Handle, from_callable
from .report import Check, LawReport
from .stepfn import (
    StepFunction,
    add,
    cell_budget,
    cell_points,
    check_budget,
    eu_norm,
    gamma_xi,
    module_action,
    random_step_function,
    step_norm,
)

LAW_TOL = 1e-9


def _fsum_columns(rows: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(col) for col in np.asarray(rows).T])


# ---------------------------------------------------------------- averaging and T


def frakA(bs, measures, total: float | None = None) -> AlgebraElement | np.ndarray:
    """Measure-weighted average sum_i (mu_i / mu) b_i.

    Accepts AlgebraElements (returns one) or an (k, n) coefficient array.
    """
    elems = isinstance(bs[0], AlgebraElement) if len(bs) else False
    coeffs = np.array([b.coeffs for b in bs]) if elems else np.asarray(bs, dtype=float)
    w = np.asarray(measures, dtype=float)
    k = len(w)
    if coeffs.shape[0] != k:
        raise ArityMismatch(f"{coeffs.shape[0]} values for {k} sub-box measures")
    if k == 0 or k & (k - 1):
        raise ArityMismatch("the number of inputs must be a power of two")
    if np.any(w < 0):
        raise BadWeights("negative sub-box measure")
    s = math.fsum(w)
    total = s if total is None else float(total)
    if total <= 0 or abs(s - total) > 1e-12 * max(1.0, abs(total)):
        raise BadWeights(f"sub-box measures sum to {s}, expected {total}")
    out = _fsum_columns(coeffs * (w / total)[:, None])
    return AlgebraElement(bs[0].algebra, out) if elems else out


def integrate_step(f: StepFunction) -> AlgebraElement:
    """sum_i b_i mu(I_i), compensated per coordinate."""
    if len(f) == 0:
        return f.algebra.zero()
    return AlgebraElement(f.algebra, _fsum_columns(f.coeffs * f.measures()[:, None]))


# ---------------------------------------------------------------- refinement limit


@dataclass
class IntegralReport:
    value: AlgebraElement
    levels: list[int]
    values: list[np.ndarray]
    deltas: list[float]
    converged: bool
    exact: bool
    cells: int
    rule: str
    tol: float

    def to_dict(self) -> dict:
        return {
            "value": self.value.to_dict(),
            "levels": list(self.levels),
            "values": [dict(zip(self.value.algebra.labels, map(float, v))) for v in self.values],
            "deltas": [float(d) for d in self.deltas],
            "converged": self.converged,
            "exact": self.exact,
            "cells": int(self.cells),
            "rule": self.rule,
            "tol": self.tol,
        }


def level_integral(h: Handle, domain, u: int, rule: str = "midpoint", budget: int | None = None, chunk: int = 1 << 16) -> np.ndarray:
    """Integral of the level-u sample of h, evaluated in chunks without building the cells."""
    ncells = check_budget(domain, u, budget)
    n = h.codomain.dim
    partial = []
    for start in range(0, ncells, chunk):
        idx = np.arange(start, min(start + chunk, ncells))
        pts, lo, hi, _ = cell_points(domain, u, idx, rule)
        vals = h(pts)
        meas = np.prod(hi - lo, axis=1)
        partial.append(_fsum_columns(vals * meas[:, None]))
    return _fsum_columns(np.array(partial).reshape(-1, n))


def default_u_max(dim: int, budget: int | None = None, cap: int = 20) -> int:
    budget = cell_budget() if budget is None else budget
    return max(0, min(cap, int(math.floor(math.log2(budget) / dim + 1e-12))))


def _as_handle(h, algebra) -> Handle:
    return h if isinstance(h, Handle) else from_callable(h, algebra)


def integrate_limit(
    h,
    ctx: SigmaContext,
    tol: float = 1e-6,
    u_max: int | None = None,
    rule: str = "midpoint",
    level: int | None = None,
    budget: int | None = None,
) -> IntegralReport:
    """Integrate h by refining the dyadic-by-xi grid until successive levels agree within tol.

    With ``level`` set, only that level is reported (plus the one before it
    when a delta is needed).  Handles of known low degree stop as soon as
    the sampling rule is exact for them.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if rule not in ("midpoint", "corner"):
        raise ValueError(f"unknown sampling rule {rule!r}")
    h = _as_handle(h, ctx.B)
    dom = ctx.domain
    exact_at = h.exact_level(rule)
    if level is not None:
        if level < 0:
            raise ValueError("level must be >= 0")
        exact = exact_at is not None and level >= exact_at
        levels = [level] if exact or level == 0 else [level - 1, level]
    else:
        u_max = default_u_max(dom.dim, budget) if u_max is None else u_max
        if u_max < 0:
            raise ValueError("u_max must be >= 0")
        levels = range(0, u_max + 1)
        exact = False

    values, done, deltas = [], [], []
    converged = False
    for u in levels:
        values.append(level_integral(h, dom, u, rule, budget))
        done.append(u)
        if len(values) > 1:
            deltas.append(float(ctx.norm(values[-1] - values[-2])))
        if exact_at is not None and u >= exact_at:
            exact = converged = True
            break
        if deltas and deltas[-1] < tol:
            converged = True
            break
    return IntegralReport(
        value=AlgebraElement(ctx.B, values[-1]),
        levels=done,
        values=values,
        deltas=deltas,
        converged=converged,
        exact=exact,
        cells=2 ** (done[-1] * dom.dim),
        rule=rule,
        tol=tol,
    )


def bochner_integrate(h, n: int, m: int, tol: float = 1e-6, u_max: int | None = None, rule: str = "midpoint") -> np.ndarray:
    """Integral over [0,1]^n of an R^m-valued function, as a vector."""
    ctx = bochner_context(n, m)
    rep = integrate_limit(_as_handle(h, ctx.B), ctx, tol=tol, u_max=u_max, rule=rule)
    return np.array(rep.value.coeffs)


def lebesgue_integrate(h, tol: float = 1e-6, u_max: int | None = None, c: float = 0.0, d: float = 1.0, rule: str = "midpoint") -> float:
    ctx = lebesgue_context(c, d)
    rep = integrate_limit(_as_handle(h, ctx.B), ctx, tol=tol, u_max=u_max, rule=rule)
    return float(rep.value.coeffs[0])


# ---------------------------------------------------------------- category triples


@dataclass(eq=False)
class CategoryTriple:
    """An object (N, v, delta) together with the operations the law checkers need."""

    kind: str
    ctx: SigmaContext
    v: object
    delta: Callable[[Sequence], object]
    norm: Callable[[object], float]
    act: Callable[[AlgebraElement, object, AlgebraElement], object]
    combine: Callable[[float, object, float, object], object]
    random: Callable[[np.random.Generator], object] = field(repr=False)

    def dist(self, x, y) -> float:
        return self.norm(self.combine(1.0, x, -1.0, y))


def step_module(ctx: SigmaContext, max_cuts: int = 3) -> CategoryTriple:
    """Step functions with the constant unit function and juxtaposition."""
    return CategoryTriple(
        kind="step-module",
        ctx=ctx,
        v=StepFunction.constant(ctx.domain, ctx.B.one()),
        delta=gamma_xi,
        norm=lambda f: step_norm(f, ctx.norm),
        act=lambda a, f, b: module_action(a, f, b, ctx.sigma),
        combine=lambda k1, f, k2, g: add(k1 * f, k2 * g),
        random=lambda rng: random_step_function(rng, ctx.domain, ctx.B, max_cuts=max_cuts),
    )


def algebra_module(ctx: SigmaContext) -> CategoryTriple:
    """B itself with mu * 1_B and the averaging map."""
    w = ctx.domain.subbox_measures()
    B = ctx.B
    return CategoryTriple(
        kind="algebra-module",
        ctx=ctx,
        v=ctx.mu * B.one(),
        delta=lambda xs: frakA(list(xs), w, ctx.mu),
        norm=ctx.norm,
        act=lambda a, x, b: ctx.sigma(a) * x * b,
        combine=lambda k1, x, k2, y: k1 * x + k2 * y,
        random=lambda rng: B.element(rng.uniform(-1, 1, B.dim)),
    )


def check_N_laws(t: CategoryTriple, tol: float = LAW_TOL) -> LawReport:
    mu = t.ctx.mu
    n_v = t.norm(t.v)
    arity = 2**t.ctx.domain.dim
    fixed = t.dist(t.delta([t.v] * arity), t.v)
    return LawReport(
        f"object axioms ({t.kind}, {t.ctx.name})",
        [
            Check("N2_norm_of_v", max(0.0, n_v - mu), tol, {"norm_v": n_v, "mu": mu}),
            Check("N3_delta_fixes_v", fixed, tol),
        ],
    )


def _random_element(rng, alg) -> AlgebraElement:
    return alg.element(rng.uniform(-1, 1, alg.dim))


def check_H_laws(
    source: CategoryTriple,
    target: CategoryTriple,
    theta: Callable,
    trials: int = 100,
    rng: np.random.Generator | None = None,
    tol: float = LAW_TOL,
) -> LawReport:
    """Residuals of a candidate morphism: v -> v', the commuting square, linearity, bimodule law."""
    rng = rng or np.random.default_rng(0)
    ctx = source.ctx
    arity = 2**ctx.domain.dim
    h1 = target.dist(theta(source.v), target.v)
    sq = lin = bim = 0.0
    sq_w = lin_w = bim_w = None
    for trial in range(trials):
        fs = [source.random(rng) for _ in range(arity)]
        r = target.dist(target.delta([theta(f) for f in fs]), theta(source.delta(fs)))
        if r > sq:
            sq, sq_w = r, trial
        f, g = fs[0], fs[-1]
        k1, k2 = (2.0, -3.0) if trial == 0 else tuple(rng.uniform(-3, 3, 2))
        r = target.dist(theta(source.combine(k1, f, k2, g)), target.combine(k1, theta(f), k2, theta(g)))
        if r > lin:
            lin, lin_w = r, trial
        a, b = _random_element(rng, ctx.A), _random_element(rng, ctx.B)
        r = target.dist(theta(source.act(a, f, b)), target.act(a, theta(f), b))
        if r > bim:
            bim, bim_w = r, trial
    return LawReport(
        f"morphism laws ({ctx.name})",
        [
            Check("H1_unit", h1, tol),
            Check("H2_square", sq, tol, sq_w),
            Check("linearity", lin, tol, lin_w),
            Check("bimodule", bim, tol, bim_w),
        ],
    )


def mutated_theta(scale: float = 1.01) -> Callable[[StepFunction], AlgebraElement]:
    """integrate_step scaled by a constant; a regression fixture that must fail the unit law."""
    return lambda f: scale * integrate_step(f)


# ---------------------------------------------------------------- Daniell axioms


def shrink_sequence(ctx: SigmaContext, b: AlgebraElement, t: int) -> StepFunction:
    """b times the indicator of [c, c + (d - c) 2^-t) on every axis."""
    dom = ctx.domain
    hi = dom.lo + (dom.hi - dom.lo) * 2.0**-t
    d = dom.dim
    if t == 0:
        return StepFunction.constant(dom, b)
    return StepFunction(dom, ctx.B, dom.lo, hi, np.ones(d, bool), np.zeros(d, bool), b.coeffs)


def scalarize(f: StepFunction, ctx: SigmaContext) -> StepFunction:
    """x -> ||f(x)|| 1_B on the same pieces."""
    return f.with_coeffs(ctx.norm.rows(f.coeffs)[:, None] * ctx.B.unit)


def unit_split(x: AlgebraElement) -> tuple[float, float]:
    """x = omega 1_B + rest, with omega from the orthogonal projection; returns (omega, max|rest|)."""
    u = x.algebra.unit
    omega = float(x.coeffs @ u / (u @ u))
    return omega, float(np.max(np.abs(x.coeffs - omega * u), initial=0.0))


def daniell_suite(
    ctx: SigmaContext,
    sequence: str = "shrink",
    trials: int = 100,
    rng: np.random.Generator | None = None,
    t_max: int = 20,
    tol: float = 1e-6,
) -> LawReport:
    if sequence != "shrink":
        raise ValueError(f"unknown sequence fixture {sequence!r}")
    rng = rng or np.random.default_rng(0)
    S = step_module(ctx)
    T = integrate_step
    checks = []

    lin = bim = 0.0
    for trial in range(trials):
        f, g = S.random(rng), S.random(rng)
        k1, k2 = (2.0, -3.0) if trial == 0 else tuple(rng.uniform(-3, 3, 2))
        lin = max(lin, ctx.norm(T(k1 * f + k2 * g) - (k1 * T(f) + k2 * T(g))))
        a, b = _random_element(rng, ctx.A), _random_element(rng, ctx.B)
        bim = max(bim, ctx.norm(T(S.act(a, f, b)) - ctx.sigma(a) * T(f) * b))
    checks.append(Check("I1_linearity", lin, LAW_TOL))
    checks.append(Check("I1_bimodule", bim, LAW_TOL))

    off = 0.0
    omega_min = math.inf
    for _ in range(trials):
        omega, rest = unit_split(T(scalarize(S.random(rng), ctx)))
        off = max(off, rest)
        omega_min = min(omega_min, omega)
    b = _random_element(rng, ctx.B)
    const = T(scalarize(StepFunction.constant(ctx.domain, b), ctx))
    const_res = ctx.norm(const - (ctx.norm(b) * ctx.mu) * ctx.B.one())
    checks.append(Check("I2_off_unit", off, 1e-12))
    checks.append(Check("I2_nonnegative", omega_min if trials else 0.0, -1e-12, sense="ge"))
    checks.append(Check("I2_constant", const_res, LAW_TOL))

    b = _random_element(rng, ctx.B)
    b = b / ctx.norm(b)
    norms = [ctx.norm(T(shrink_sequence(ctx, b, t))) for t in range(t_max + 1)]
    increase = max((y - x for x, y in zip(norms, norms[1:])), default=0.0)
    closed = max(abs(nv - ctx.mu * 2.0 ** (-t * ctx.domain.dim)) for t, nv in enumerate(norms))
    checks.append(Check("I3_nonincreasing", max(0.0, increase), 0.0, norms))
    checks.append(Check("I3_limit", norms[-1], tol, t_max))
    checks.append(Check("I3_closed_form", closed, 1e-12))
    return LawReport(f"integral axioms ({ctx.name})", checks)


# ---------------------------------------------------------------- operator norm


def random_cell_function(rng, ctx: SigmaContext, u: int) -> StepFunction:
    ncells = check_budget(ctx.domain, u)
    _, lo, hi, idx = cell_points(ctx.domain, u, np.arange(ncells))
    mode = rng.integers(3)
    if mode == 0:
        coeffs = rng.uniform(-1, 1, (ncells, ctx.B.dim))
    elif mode == 1:  # one shared direction with random nonnegative weights
        coeffs = rng.random((ncells, 1)) * rng.uniform(-1, 1, ctx.B.dim)
    else:  # sparse
        coeffs = rng.uniform(-1, 1, (ncells, ctx.B.dim)) * (rng.random((ncells, 1)) < 0.2)
    return StepFunction(ctx.domain, ctx.B, lo, hi, np.ones_like(lo, bool), idx == 2**u - 1, coeffs)


def operator_norm_check(
    ctx: SigmaContext,
    u_max: int = 4,
    trials: int = 200,
    rng: np.random.Generator | None = None,
    max_cells: int = 1 << 16,
) -> LawReport:
    """Sampled sup of ||T f|| over unit vectors of the level-u cell spaces, for p = 1.

    Unit vectors are measured in the direct-sum norm of the dyadic
    hierarchy, the norm under which the ratio with the constant function is mu.
    """
    if ctx.p != 1:
        raise ValueError("the operator-norm claim is for p = 1")
    rng = rng or np.random.default_rng(0)
    mu = ctx.mu
    checks = []
    for u in range(u_max + 1):
        if 2 ** (u * ctx.domain.dim) > max_cells:
            break
        best = 0.0
        for _ in range(trials):
            f = random_cell_function(rng, ctx, u)
            nf = eu_norm(f, ctx.norm)
            if nf > 0:
                best = max(best, ctx.norm(integrate_step(f)) / nf)
        w = _refine(StepFunction.constant(ctx.domain, ctx.B.one() / mu), ctx, u)
        witness = ctx.norm(integrate_step(w)) / eu_norm(w, ctx.norm)
        est = max(best, witness)
        checks.append(Check(f"u{u}_upper", est, mu * (1 + 1e-9), {"random": best, "witness": witness}))
        checks.append(Check(f"u{u}_witness", witness, mu * (1 - 1e-3), sense="ge"))
    return LawReport(f"operator norm ({ctx.name})", checks)


def _refine(f: StepFunction, ctx: SigmaContext, u: int) -> StepFunction:
    for _ in range(u):
        f = gamma_xi([f] * 2**ctx.domain.dim)
    return f
