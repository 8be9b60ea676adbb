"""Integration contexts (A, B, sigma, domain, norm) and the named integrands shipped with them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import handles as H
from .algebra import AlgebraHom, StructureConstantAlgebra
from .errors import AlgebraMismatch, ConfigError
from .fixtures import (
    complex_plane,
    example7_A,
    example7_B,
    example7_sigma,
    path_square_sigma,
    real_line,
    semisimple,
)
from .norms import BasisNormFn, PNormSpec
from .stepfn import Domain


@dataclass(frozen=True, eq=False)
class SigmaContext:
    name: str
    A: StructureConstantAlgebra
    B: StructureConstantAlgebra
    sigma: AlgebraHom
    domain: Domain
    norm: PNormSpec
    a_norm: PNormSpec | None = None

    def __post_init__(self):
        if self.sigma.domain is not self.A or self.sigma.codomain is not self.B:
            raise AlgebraMismatch("sigma must map A to B")
        if self.domain.dim != self.A.dim:
            raise ConfigError(f"domain has {self.domain.dim} axes but A has dimension {self.A.dim}")
        if self.norm.algebra is not self.B:
            raise AlgebraMismatch("norm spec must be over B")
        if self.a_norm is None:
            object.__setattr__(self, "a_norm", PNormSpec(self.norm.p, BasisNormFn.ones(self.A)))

    @property
    def p(self) -> float:
        return self.norm.p

    @property
    def mu(self) -> float:
        return self.domain.measure

    def describe(self) -> dict:
        return {
            "name": self.name,
            "A": self.A.name,
            "B": self.B.name,
            "sigma": self.sigma.name,
            "domain": self.domain.to_dict(),
            "p": self.p,
        }


def make_context(name, A, B, sigma, domain, p: float = 1.0) -> SigmaContext:
    return SigmaContext(name, A, B, sigma, domain, PNormSpec.unit(B, p))


@lru_cache(maxsize=None)
def bochner_context(n: int, m: int, p: float = 1.0) -> SigmaContext:
    """R^n acting on R^m-valued functions over [0,1]^n through the zero map."""
    A, B = semisimple(n), semisimple(m)
    zero = AlgebraHom(A, B, np.zeros((m, n)), check=False, name="zero")
    return make_context(f"bochner-{n}-{m}", A, B, zero, Domain.cube(n), p)


@lru_cache(maxsize=None)
def lebesgue_context(c: float = 0.0, d: float = 1.0) -> SigmaContext:
    R = real_line()
    ident = AlgebraHom(R, R, [[1.0]], name="identity-real")
    return make_context("lebesgue", R, R, ident, Domain.cube(1, c, d))


@lru_cache(maxsize=None)
def _complex_square() -> SigmaContext:
    C = complex_plane()
    return make_context("complex-square", C, C, AlgebraHom(C, C, np.eye(2), name="identity-complex"), Domain.cube(2))


@lru_cache(maxsize=None)
def _path_square() -> SigmaContext:
    sig = path_square_sigma()
    return make_context("path-square", sig.domain, sig.codomain, sig, Domain.cube(2, 0.0, 2.0, 0.5))


@lru_cache(maxsize=None)
def _example7() -> SigmaContext:
    return make_context("example7", example7_A(), example7_B(), example7_sigma(), Domain.cube(11))


CONTEXTS = {
    "lebesgue": lebesgue_context,
    "complex-square": _complex_square,
    "path-square": _path_square,
    "example7": _example7,
    "bochner-2-3": lambda: bochner_context(2, 3),
    "bochner-1-2": lambda: bochner_context(1, 2),
}


def context(name: str) -> SigmaContext:
    try:
        return CONTEXTS[name]()
    except KeyError:
        raise ConfigError(f"unknown context {name!r}; known: {sorted(CONTEXTS)}") from None


@dataclass(frozen=True)
class IntegrandFixture:
    context: str
    build: object = field(repr=False)
    description: str = ""

    def handle(self):
        return self.build(context(self.context))


def _b3(ctx):
    B = ctx.B
    return H.affine([0.0, 0.0, 1.0], [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], B)


INTEGRANDS = {
    "example7": IntegrandFixture("example7", lambda c: H.sigma_restriction(c.sigma), "sigma restricted to [0,1]^11"),
    "lebesgue-x": IntegrandFixture("lebesgue", lambda c: H.coordinate(0), "x on [0,1]"),
    "lebesgue-x2": IntegrandFixture("lebesgue", lambda c: H.polynomial_1d([0.0, 0.0, 1.0]), "x^2 on [0,1]"),
    "lebesgue-exp": IntegrandFixture("lebesgue", lambda c: H.exp(), "exp(x) on [0,1]"),
    "lebesgue-one": IntegrandFixture("lebesgue", lambda c: H.constant(1.0), "1 on [0,1]"),
    "constant-one": IntegrandFixture("path-square", lambda c: H.constant(c.B.one()), "the unit of B on [0,2]^2"),
    "bochner-xy1": IntegrandFixture("bochner-2-3", _b3, "(x, y, 1) on [0,1]^2"),
    "bochner-trig": IntegrandFixture(
        "bochner-1-2", lambda c: H.stack([H.sin(1.0), H.cos(1.0)], c.B), "(sin 2 pi x, cos 2 pi x)"
    ),
    "bochner-zero": IntegrandFixture("bochner-2-3", lambda c: H.constant(c.B.zero()), "zero map"),
}


def integrand(name: str):
    try:
        fx = INTEGRANDS[name]
    except KeyError:
        raise ConfigError(f"unknown integrand fixture {name!r}; known: {sorted(INTEGRANDS)}") from None
    return context(fx.context), fx.handle()
