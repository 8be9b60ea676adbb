"""Weighted p-norms on algebras and the seminorm pulled back along a homomorphism."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .algebra import AlgebraElement, AlgebraHom, StructureConstantAlgebra, apply_hom
from .errors import AlgebraMismatch


@dataclass(frozen=True, eq=False)
class BasisNormFn:
    algebra: StructureConstantAlgebra
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.algebra.dim,):
            raise ValueError("one basis norm value per basis element is required")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValueError("basis norm values must be finite and nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def ones(cls, algebra: StructureConstantAlgebra) -> "BasisNormFn":
        return cls(algebra, np.ones(algebra.dim))

    @classmethod
    def from_mapping(cls, algebra, values: Mapping[str, float]) -> "BasisNormFn":
        default = float(values.get("...default", 1.0))
        v = np.full(algebra.dim, default)
        for k, x in values.items():
            if k != "...default":
                v[algebra.index(k)] = float(x)
        return cls(algebra, v)

    @property
    def separating(self) -> bool:
        return bool(np.all(self.values > 0))


@dataclass(frozen=True, eq=False)
class PNormSpec:
    p: float
    basis_norm: BasisNormFn

    def __post_init__(self):
        if not (self.p >= 1 and np.isfinite(self.p)):
            raise ValueError("p must be a finite real >= 1")

    @classmethod
    def unit(cls, algebra: StructureConstantAlgebra, p: float = 1.0) -> "PNormSpec":
        return cls(float(p), BasisNormFn.ones(algebra))

    @property
    def algebra(self) -> StructureConstantAlgebra:
        return self.basis_norm.algebra

    def rows(self, coeffs) -> np.ndarray:
        """Norm of every row of an (..., n) coefficient array."""
        w = np.abs(np.asarray(coeffs, dtype=float)) * self.basis_norm.values
        if self.p == 1:
            return w.sum(axis=-1)
        if self.p == 2:
            return np.sqrt((w * w).sum(axis=-1))
        # scale by the max entry so large p does not overflow
        m = w.max(axis=-1, initial=0.0)
        safe = np.where(m > 0, m, 1.0)
        return m * ((w / safe[..., None]) ** self.p).sum(axis=-1) ** (1.0 / self.p)

    def __call__(self, x) -> float:
        if isinstance(x, AlgebraElement):
            if x.algebra is not self.algebra:
                raise AlgebraMismatch("norm spec and element belong to different algebras")
            x = x.coeffs
        return float(self.rows(x))


def algebra_norm(spec: PNormSpec, x: AlgebraElement) -> float:
    return spec(x)


def seminorm_sigma(h: AlgebraHom, codomain_spec: PNormSpec, a: AlgebraElement) -> float:
    if codomain_spec.algebra is not h.codomain:
        raise AlgebraMismatch("norm spec is not over the codomain of the map")
    return codomain_spec(apply_hom(h, a))


def product_inflation(spec: PNormSpec) -> float:
    """Constant C with ||x*y|| <= C ||x|| ||y|| for all x, y.

    Bounded through the p=1 case: ||x*y||_1 <= C1 ||x||_1 ||y||_1 with
    C1 = max_ij ||e_i e_j||_1 / (n_i n_j), then the norm equivalences
    ||.||_1 <= n^(1-1/p) ||.||_p and ||.||_p <= ||.||_1 give the factor
    n^(2(1-1/p)).  Basis elements of weight zero are skipped, which is only
    meaningful for point-separating weights.
    """
    alg = spec.algebra
    w = spec.basis_norm.values
    one = PNormSpec(1.0, spec.basis_norm)
    prods = one.rows(alg.table)  # (n, n)
    denom = np.outer(w, w)
    ok = denom > 0
    c1 = float(np.max(prods[ok] / denom[ok], initial=0.0))
    n = alg.dim
    return c1 * n ** (2.0 * (1.0 - 1.0 / spec.p))
