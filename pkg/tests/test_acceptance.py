"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the pytest terminal summary.
Run directly with ``python tests/test_acceptance.py`` for just the lines.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from qint import handles as H
from qint.algebra import verify_algebra, verify_hom
from qint.approx import convergence_report
from qint.contexts import context, integrand
from qint.fixtures import example7_A, example7_sigma
from qint.formats import data_file
from qint.integrate import (
    algebra_module,
    bochner_integrate,
    check_H_laws,
    daniell_suite,
    integrate_limit,
    integrate_step,
    lebesgue_integrate,
    operator_norm_check,
    step_module,
)
from qint.laws import norm_axioms
from qint.rng import stream

SEED = 20240601
RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)


def qint(*args):
    """Run the installed command line in a fresh interpreter."""
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "qint.cli", *map(str, args)], capture_output=True, text=True)
    return proc.returncode, proc.stdout, time.perf_counter() - t0


def test_1_worked_example_integral():
    code, out, secs = qint("integrate", "--fixture", "example7", "--rule", "midpoint", "--u", "1")
    value = json.loads(out)["result"]["value"]
    expect = {l: (0.5 if l in ("e1", "e2", "e3", "a", "b", "c") else 0.0) for l in value}
    err = max(abs(value[k] - expect[k]) for k in expect)
    ok = code == 0 and err <= 1e-9 and secs <= 10
    record(1, ok, f"max abs error {err:.1e}, {secs:.2f}s, exit {code}, value {value}")
    assert ok


def _algebra_half():
    rep = verify_algebra(example7_A())
    assoc, lu, ru = rep["associativity"], rep["left_unit"], rep["right_unit"]
    ok = rep.ok and max(assoc.residual, lu.residual, ru.residual) <= 1e-12
    return ok, f"associativity {assoc.residual:.1e}, unit {max(lu.residual, ru.residual):.1e}"


def test_2a_algebra_validity():
    ok, _ = _algebra_half()
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="the documented sigma cannot be multiplicative: its kernel would be an ideal containing x1, hence the unit",
)
def test_2b_sigma_multiplicative():
    alg_ok, alg_detail = _algebra_half()
    mult = verify_hom(example7_sigma())["multiplicative"]
    ok = alg_ok and mult.residual <= 1e-12
    record(2, ok, f"{alg_detail}; sigma multiplicativity residual {mult.residual:g} at {mult.witness}")
    assert ok


def test_3_commuting_square():
    worst = 0.0
    for name in ("lebesgue", "complex-square", "path-square"):
        ctx = context(name)
        rep = check_H_laws(step_module(ctx), algebra_module(ctx), integrate_step, 100, stream(SEED, "acc3", name))
        worst = max(worst, rep["H2_square"].residual)
    ok = worst <= 1e-9
    record(3, ok, f"max square residual {worst:.1e} over d=1 and d=2 contexts, 100 tuples each")
    assert ok


def test_4_integral_axioms():
    i1 = off = 0.0
    i3 = 0.0
    ok = True
    for name in ("lebesgue", "complex-square", "path-square"):
        rep = daniell_suite(context(name), trials=100, rng=stream(SEED, "acc4", name), t_max=20, tol=1e-6)
        i1 = max(i1, rep["I1_linearity"].residual, rep["I1_bimodule"].residual)
        off = max(off, rep["I2_off_unit"].residual)
        i3 = max(i3, rep["I3_limit"].residual)
        ok &= rep["I2_nonnegative"].passed
    ok = ok and i1 <= 1e-9 and off <= 1e-12 and i3 < 1e-6
    record(4, ok, f"I1 {i1:.1e}, I2 off-unit {off:.1e}, I3 norm at t=20 {i3:.1e}")
    assert ok


def test_5_operator_norm():
    lines, ok = [], True
    for name in ("lebesgue", "complex-square", "path-square"):
        ctx = context(name)
        rep = operator_norm_check(ctx, u_max=4, trials=200, rng=stream(SEED, "acc5", name))
        mu = ctx.mu
        for u in range(5):
            est = rep[f"u{u}_upper"].residual
            ok &= mu * (1 - 1e-3) <= est <= mu * (1 + 1e-9)
        lines.append(f"{name} mu={mu:g}")
    record(5, ok, "estimates within [mu(1-1e-3), mu(1+1e-9)] for u<=4: " + ", ".join(lines))
    assert ok


def test_6_lebesgue_and_bochner():
    out, ok = [], True
    cases = [
        ("int x", lambda: lebesgue_integrate(H.coordinate(0), tol=1e-3, u_max=12), 0.5),
        ("int x^2", lambda: integrate_limit(*reversed(integrand("lebesgue-x2")), tol=1e-3, u_max=12).value.coeffs[0], 1 / 3),
        ("bochner (x,y,1)", lambda: bochner_integrate(integrand("bochner-xy1")[1], 2, 3, tol=1e-3, u_max=12), np.array([0.5, 0.5, 1.0])),
    ]
    for label, run, expect in cases:
        t0 = time.perf_counter()
        got = run()
        secs = time.perf_counter() - t0
        err = float(np.max(np.abs(np.asarray(got) - expect)))
        ok &= err <= 1e-3 and secs <= 5
        out.append(f"{label} err {err:.1e} in {secs:.2f}s")
    record(6, ok, "; ".join(out))
    assert ok


def test_7_norm_axioms():
    rep = norm_axioms(SEED, trials=1000)
    wanted = [c for c in rep.checks if c.name.split("_p")[0] in ("triangle", "homogeneity", "step_triangle", "step_homogeneity") or c.name == "refinement_p1"]
    worst = max(c.residual for c in wanted)
    ok = rep.ok and worst <= 1e-12
    record(7, ok, f"{len(wanted)} checks x 1000 cases, worst excess {worst:.1e}")
    assert ok


def test_8_approximation():
    tay = convergence_report("exp", "taylor", range(1, 9))
    fou = convergence_report("identity", "fourier", [1, 2, 4, 8, 16])
    ok = tay.strictly_decreasing and tay.errors[-1] <= 1e-4 and fou.weakly_decreasing and fou.errors[-1] <= 5e-2
    record(8, ok, f"taylor exp order 8 {tay.errors[-1]:.2e} (strict), fourier x order 16 {fou.errors[-1]:.3f} (weak)")
    assert ok


def test_9_mutations_flagged():
    c1, _, _ = qint("laws", "hsquare", "--fixture", "mutated-theta", "--trials", "20")
    c2, _, _ = qint("algebra", "check", data_file("example7_A_corrupted.json"))
    ok = c1 == 2 and c2 == 2
    record(9, ok, f"mutated morphism exit {c1}, corrupted table exit {c2}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
