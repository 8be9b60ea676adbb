"""``qint`` command line.

Exit codes: 0 pass, 1 configuration error, 2 law violation, 3 not converged.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .algebra import TAU_ALG, verify_algebra, verify_hom
from .approx import PLATEAU_TOL, approx_fixture, convergence_report
from .contexts import SigmaContext, context, integrand, make_context
from .errors import ConfigError, QintError
from .formats import (
    csv_text,
    fingerprint,
    load_algebra,
    load_hom,
    read_json,
    report_json,
    validate,
)
from .handles import build as build_handle
from .integrate import LAW_TOL, integrate_limit
from .laws import DEFAULT_CONTEXTS, DEFAULT_TRIALS, SUITES, run_suite
from .stepfn import Domain

EXIT_OK, EXIT_CONFIG, EXIT_LAW, EXIT_UNCONVERGED = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _algebra_summary(alg) -> dict:
    prods = []
    for i, a in enumerate(alg.labels):
        for j, b in enumerate(alg.labels):
            row = alg.table[i, j]
            if np.any(row):
                prods.append({"left": a, "right": b, "result": {alg.labels[k]: float(row[k]) for k in np.flatnonzero(row)}})
    return {
        "name": alg.name,
        "dim": alg.dim,
        "basis": list(alg.labels),
        "unit": {alg.labels[k]: float(alg.unit[k]) for k in np.flatnonzero(alg.unit)},
        "nonzero_products": prods,
    }


def cmd_algebra(args) -> int:
    alg, spec = load_algebra(args.source, check=False)
    rep = verify_algebra(alg)
    result = {"report": rep.to_dict()}
    if args.action == "build":
        result["algebra"] = _algebra_summary(alg)
        if spec is not None:
            result["norm"] = {"p": spec.p, "basis_norm": dict(zip(alg.labels, spec.basis_norm.values.tolist()))}
    else:
        result["algebra"] = {"name": alg.name, "dim": alg.dim}
    code = EXIT_OK if rep.ok else EXIT_LAW
    _emit(
        report_json(f"algebra {args.action}", result, seed=None, tolerances={"tau_alg": TAU_ALG},
                    fixtures={alg.name: fingerprint(alg)}, exit_code=code),
        args.out,
    )
    return code


def cmd_hom(args) -> int:
    h = load_hom(args.source, check=False)
    rep = verify_hom(h)
    result = {
        "hom": {"name": h.name, "domain": h.domain.name, "codomain": h.codomain.name, "shape": list(h.matrix.shape)},
        "report": rep.to_dict(),
    }
    code = EXIT_OK if rep.ok else EXIT_LAW
    _emit(
        report_json("hom check", result, seed=None, tolerances={"tau_alg": TAU_ALG},
                    fixtures={h.name: fingerprint(h)}, exit_code=code),
        args.out,
    )
    return code


CONFIG_SCHEMA = {
    "type": "object",
    "required": ["handle"],
    "properties": {
        "context": {"type": "string"},
        "A": {"type": ["string", "object"]},
        "B": {"type": ["string", "object"]},
        "sigma": {"type": ["string", "object"]},
        "domain": {
            "type": "object",
            "required": ["lo", "hi"],
            "properties": {"lo": {}, "hi": {}, "xi": {}},
            "additionalProperties": False,
        },
        "p": {"type": "number", "minimum": 1},
        "handle": {"type": "object", "required": ["kind"]},
        "rule": {"enum": ["midpoint", "corner"]},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "u": {"type": "integer", "minimum": 0},
        "u_max": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}


def _context_from_config(cfg: dict, base: Path) -> SigmaContext:
    if "context" in cfg:
        return context(cfg["context"])

    def ref(x):
        if isinstance(x, str) and not Path(x).is_absolute() and (base / x).exists():
            return str(base / x)
        return x

    if "A" not in cfg or "B" not in cfg or "sigma" not in cfg:
        raise ConfigError("config needs either 'context' or all of 'A', 'B', 'sigma'")
    A, _ = load_algebra(ref(cfg["A"]))
    B, bspec = load_algebra(ref(cfg["B"]))
    if cfg["sigma"] == "zero":
        from .algebra import AlgebraHom

        sig = AlgebraHom(A, B, np.zeros((B.dim, A.dim)), check=False, name="zero")
    else:
        sig = load_hom(ref(cfg["sigma"]))
        if sig.domain.name != A.name or sig.codomain.name != B.name:
            raise ConfigError("sigma's domain/codomain do not match A and B")
        A, B = sig.domain, sig.codomain
    dspec = cfg.get("domain", {"lo": 0.0, "hi": 1.0})
    lo = np.broadcast_to(np.asarray(dspec["lo"], dtype=float), (A.dim,))
    hi = np.broadcast_to(np.asarray(dspec["hi"], dtype=float), (A.dim,))
    xi = None if "xi" not in dspec else np.broadcast_to(np.asarray(dspec["xi"], dtype=float), (A.dim,))
    try:
        dom = Domain(lo, hi, xi)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return make_context("config", A, B, sig, dom, float(cfg.get("p", bspec.p if bspec else 1.0)))


def cmd_integrate(args) -> int:
    if bool(args.fixture) == bool(args.config):
        raise ConfigError("give exactly one of --fixture or --config")
    if args.fixture:
        ctx, h = integrand(args.fixture)
        cfg = {}
        label = args.fixture
    else:
        cfg = read_json(args.config)
        validate(cfg, CONFIG_SCHEMA, args.config)
        ctx = _context_from_config(cfg, Path(args.config).parent)
        h = build_handle(cfg["handle"], ctx.B, ctx.sigma)
        label = Path(args.config).stem
    rule = args.rule or cfg.get("rule", "midpoint")
    tol = args.tol if args.tol is not None else cfg.get("tol", 1e-6)
    level = args.u if args.u is not None else cfg.get("u")
    u_max = args.u_max if args.u_max is not None else cfg.get("u_max")
    if tol <= 0:
        raise ConfigError("--tol must be positive")
    rep = integrate_limit(h, ctx, tol=tol, u_max=u_max, rule=rule, level=level)
    code = EXIT_OK if rep.converged else EXIT_UNCONVERGED
    result = rep.to_dict()
    result["context"] = ctx.describe()
    result["integrand"] = {"name": h.name, "params": h.params}
    _emit(
        report_json("integrate", result, seed=args.seed, tolerances={"tol": tol},
                    fixtures={label: fingerprint(h), ctx.A.name: fingerprint(ctx.A), ctx.B.name: fingerprint(ctx.B),
                              ctx.sigma.name: fingerprint(ctx.sigma)},
                    exit_code=code),
        args.out,
    )
    if args.csv:
        labels = ctx.B.labels
        rows = []
        for i, (u, v) in enumerate(zip(rep.levels, rep.values)):
            rows.append([u, "" if i == 0 else repr(rep.deltas[i - 1])] + [repr(float(x)) for x in v])
        Path(args.csv).write_text(csv_text(["level", "delta", *labels], rows), encoding="utf-8", newline="")
    return code


def cmd_laws(args) -> int:
    trials = args.trials if args.trials is not None else DEFAULT_TRIALS[args.suite]
    contexts = args.context or DEFAULT_CONTEXTS[args.suite]
    for c in contexts:
        context(c)  # raises ConfigError for unknown names
    try:
        rep = run_suite(args.suite, args.seed, trials, contexts, args.fixture)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    code = EXIT_OK if rep.ok else EXIT_LAW
    result = rep.to_dict()
    result["suite"] = args.suite
    result["trials"] = trials
    result["contexts"] = contexts
    if args.fixture:
        result["fixture"] = args.fixture
    fx = {}
    for c in contexts:
        ctx = context(c)
        fx[c] = fingerprint([fingerprint(ctx.sigma), ctx.domain.to_dict(), ctx.p])
    _emit(
        report_json(f"laws {args.suite}", result, seed=args.seed,
                    tolerances={"law": LAW_TOL, "tau_alg": TAU_ALG, "norm_slack": 1e-12},
                    fixtures=fx, exit_code=code),
        args.out,
    )
    return code


def cmd_approx(args) -> int:
    fx = approx_fixture(args.fixture)
    try:
        rep = convergence_report(args.fixture, args.kind, args.orders, args.u)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    code = EXIT_OK if rep.weakly_decreasing else EXIT_LAW
    text = csv_text(["order", "l1_error"], [[o, repr(e)] for o, e in rep.rows()])
    _emit(text, args.out)
    if args.json:
        Path(args.json).write_text(
            report_json("approx", rep.to_dict(), seed=None, tolerances={"plateau": PLATEAU_TOL},
                        fixtures={args.fixture: fingerprint(fx.handle)}, exit_code=code),
            encoding="utf-8",
        )
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qint", description="Quiver algebras, step functions and their integrals.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("algebra", help="build or check an algebra definition")
    a.add_argument("action", choices=["build", "check"])
    a.add_argument("source", help="fixture name or JSON file")
    a.add_argument("--out", help="write the JSON report here instead of stdout")
    a.set_defaults(func=cmd_algebra)

    h = sub.add_parser("hom", help="check a homomorphism definition")
    h.add_argument("action", choices=["check"])
    h.add_argument("source", help="fixture name or JSON file")
    h.add_argument("--out")
    h.set_defaults(func=cmd_hom)

    i = sub.add_parser("integrate", help="integrate a sampled function by dyadic refinement")
    i.add_argument("--fixture", help="named integrand")
    i.add_argument("--config", help="JSON integration config")
    i.add_argument("--rule", choices=["midpoint", "corner"])
    i.add_argument("--tol", type=float)
    i.add_argument("--u", type=int, help="evaluate this refinement level only")
    i.add_argument("--u-max", type=int, dest="u_max")
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--out")
    i.add_argument("--csv", help="write the level trace as CSV")
    i.set_defaults(func=cmd_integrate)

    l = sub.add_parser("laws", help="run a randomized law suite")
    l.add_argument("suite", choices=SUITES)
    l.add_argument("--seed", type=int, default=0)
    l.add_argument("--trials", type=int)
    l.add_argument("--fixture", help="daniell: sequence (shrink); hsquare: integrate-step or mutated-theta")
    l.add_argument("--context", action="append", help="context name, repeatable")
    l.add_argument("--out")
    l.set_defaults(func=cmd_laws)

    x = sub.add_parser("approx", help="L1 convergence of truncated series")
    x.add_argument("kind", choices=["taylor", "fourier"])
    x.add_argument("fixture")
    x.add_argument("--orders", type=int, nargs="+", required=True)
    x.add_argument("--u", type=int, default=12)
    x.add_argument("--out", help="CSV path (default stdout)")
    x.add_argument("--json", help="also write a JSON report")
    x.set_defaults(func=cmd_approx)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, KeyError) as e:
        print(f"qint: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except QintError as e:
        print(f"qint: error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
