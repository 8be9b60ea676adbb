"""Truncated power and Fourier series on [0,1], with L1 errors measured by the integrator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import handles as H
from .contexts import lebesgue_context
from .errors import ConfigError
from .fixtures import real_line
from .handles import Handle
from .integrate import integrate_limit

PLATEAU_TOL = 1e-9


def taylor_truncate(coeffs: Sequence[float]) -> Handle:
    """Polynomial sum_n c_n x^n; the caller supplies c_n = f^(n)(0) / n!."""
    return H.polynomial_1d(list(coeffs) or [0.0])


def _integrate_real(h: Handle, u: int, rule: str = "midpoint") -> float:
    rep = integrate_limit(h, lebesgue_context(), level=u, rule=rule)
    return float(rep.value.coeffs[0])


def fourier_coeffs(h: Handle, N: int, u: int = 12) -> list[tuple[float, float]]:
    """(a_n, b_n) for n = 0..N with a_n = 2 int h cos(2 pi n x), b_n = 2 int h sin(2 pi n x), a_0 halved."""
    if N < 0:
        raise ValueError("N must be >= 0")
    out = []
    for n in range(N + 1):
        a = _integrate_real(h.times_scalar(H.cos(n)), u)
        b = _integrate_real(h.times_scalar(H.sin(n)), u) if n else 0.0
        out.append((a, 0.0) if n == 0 else (2 * a, 2 * b))
    return out


def fourier_partial_sum(coeffs: Sequence[tuple[float, float]], order: int | None = None) -> Handle:
    order = len(coeffs) - 1 if order is None else order
    c = np.asarray(coeffs[: order + 1], dtype=float)
    n = np.arange(len(c))

    def fn(x):
        t = 2 * np.pi * x[:, :1] * n
        return (np.cos(t) @ c[:, 0] + np.sin(t) @ c[:, 1])[:, None]

    return Handle(fn, real_line(), f"fourier[{order}]")


def l1_distance(h: Handle, g: Handle, u: int = 12, rule: str = "midpoint") -> float:
    """Integral over [0,1] of |h - g|, sampled at level u."""
    return _integrate_real((h - g).abs(), u, rule)


@dataclass
class ConvergenceReport:
    fixture: str
    kind: str
    u: int
    orders: list[int]
    errors: list[float]
    plateau_tol: float = PLATEAU_TOL

    @property
    def weakly_decreasing(self) -> bool:
        e = self.errors
        return all(b <= a + self.plateau_tol for a, b in zip(e, e[1:]))

    @property
    def strictly_decreasing(self) -> bool:
        e = self.errors
        return all(b < a for a, b in zip(e, e[1:]))

    def rows(self) -> list[tuple[int, float]]:
        return list(zip(self.orders, self.errors))

    def to_dict(self) -> dict:
        return {
            "fixture": self.fixture,
            "kind": self.kind,
            "u": self.u,
            "rows": [{"order": o, "l1_error": e} for o, e in self.rows()],
            "weakly_decreasing": self.weakly_decreasing,
            "strictly_decreasing": self.strictly_decreasing,
            "plateau_tol": self.plateau_tol,
        }


@dataclass(frozen=True)
class ApproxFixture:
    handle: Handle
    taylor: tuple[float, ...] | None
    # (kind, order, bound): the error at that order must be below bound
    documented: tuple[tuple[str, int, float], ...] = ()


def _exp_coeffs(n=40):
    return tuple(1.0 / math.factorial(k) for k in range(n))


def _cos2pi_coeffs(n=60):
    out = []
    for k in range(n):
        out.append(0.0 if k % 2 else (-1) ** (k // 2) * (2 * math.pi) ** k / math.factorial(k))
    return tuple(out)


CUBIC = (1.0, 2.0, -1.0, 0.5)

APPROX_FIXTURES = {
    "exp": ApproxFixture(H.exp(), _exp_coeffs(), (("taylor", 8, 1e-4),)),
    "identity": ApproxFixture(H.coordinate(0), (0.0, 1.0), (("fourier", 16, 5e-2), ("fourier", 64, 1e-2), ("taylor", 1, 1e-12))),
    "cubic": ApproxFixture(H.polynomial_1d(CUBIC), CUBIC, (("taylor", 3, 1e-12),)),
    # Taylor coefficients kept for demos; the partial sums overshoot before settling, so only the Fourier order is documented
    "cos2pi": ApproxFixture(H.cos(1.0), _cos2pi_coeffs(), (("fourier", 1, 1e-3),)),
    "one": ApproxFixture(H.constant(1.0), (1.0,), (("fourier", 0, 1e-9), ("taylor", 0, 1e-12))),
}


def approx_fixture(name: str) -> ApproxFixture:
    try:
        return APPROX_FIXTURES[name]
    except KeyError:
        raise ConfigError(f"unknown approximation fixture {name!r}; known: {sorted(APPROX_FIXTURES)}") from None


def convergence_report(
    h: Handle | str,
    kind: str,
    orders: Sequence[int],
    u: int = 12,
    taylor_coeffs: Sequence[float] | None = None,
) -> ConvergenceReport:
    """L1 error of the order-N truncation for each N in orders."""
    orders = [int(o) for o in orders]
    if not orders or any(o < 0 for o in orders) or any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValueError("orders must be nonnegative and strictly increasing")
    name = h if isinstance(h, str) else h.name
    if isinstance(h, str):
        fx = approx_fixture(h)
        h = fx.handle
        taylor_coeffs = fx.taylor if taylor_coeffs is None else taylor_coeffs
    errors = []
    if kind == "taylor":
        if taylor_coeffs is None:
            raise ConfigError("taylor series need an explicit coefficient list")
        c = list(taylor_coeffs)
        for N in orders:
            approx = taylor_truncate((c + [0.0] * (N + 1))[: N + 1])
            errors.append(l1_distance(h, approx, u))
    elif kind == "fourier":
        coeffs = fourier_coeffs(h, orders[-1], u)
        for N in orders:
            errors.append(l1_distance(h, fourier_partial_sum(coeffs, N), u))
    else:
        raise ConfigError(f"unknown series kind {kind!r}")
    return ConvergenceReport(name, kind, u, orders, errors)
