"""Named, vectorized functions from the domain box into an algebra.

A handle maps an (m, d) array of points to an (m, dim B) array of
coefficients.  ``degree`` records the total polynomial degree when known;
midpoint sampling is exact for degree <= 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .algebra import AlgebraElement, AlgebraHom, StructureConstantAlgebra
from .errors import ConfigError
from .fixtures import real_line
from .norms import PNormSpec


@dataclass(frozen=True, eq=False)
class Handle:
    fn: Callable[[np.ndarray], np.ndarray]
    codomain: StructureConstantAlgebra
    name: str = "custom"
    params: dict = field(default_factory=dict)
    degree: int | None = None

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        out = np.asarray(self.fn(pts), dtype=float)
        return out.reshape(pts.shape[0], self.codomain.dim)

    def exact_level(self, rule: str) -> int | None:
        """Smallest level at which the sampled integral is already exact, if known."""
        if self.degree == 0:
            return 0
        if self.degree == 1 and rule == "midpoint":
            return 0
        return None

    def __add__(self, other: "Handle") -> "Handle":
        return _combine(self, other, np.add, "+")

    def __sub__(self, other: "Handle") -> "Handle":
        return _combine(self, other, np.subtract, "-")

    def scaled(self, lam: float) -> "Handle":
        return Handle(lambda x: lam * self(x), self.codomain, f"{lam:g}*{self.name}", degree=self.degree)

    def norm_handle(self, spec: PNormSpec) -> "Handle":
        """x -> ||h(x)|| times the unit of the codomain."""
        unit = self.codomain.unit

        def fn(x):
            return spec.rows(self(x))[:, None] * unit

        return Handle(fn, self.codomain, f"|{self.name}|")

    def abs(self) -> "Handle":
        return Handle(lambda x: np.abs(self(x)), self.codomain, f"abs({self.name})")

    def times_scalar(self, s: "Handle") -> "Handle":
        """Pointwise product with a real-valued handle."""
        return Handle(lambda x: self(x) * s(x), self.codomain, f"{s.name}*{self.name}")


def _combine(f: Handle, g: Handle, op, sym: str) -> Handle:
    if f.codomain is not g.codomain:
        raise ConfigError("handles have different codomains")
    deg = None if f.degree is None or g.degree is None else max(f.degree, g.degree)
    return Handle(lambda x: op(f(x), g(x)), f.codomain, f"({f.name}{sym}{g.name})", degree=deg)


def _vec(b, algebra) -> np.ndarray:
    if isinstance(b, AlgebraElement):
        return b.coeffs
    v = np.asarray(b, dtype=float).reshape(-1)
    if v.size == 1 and algebra.dim != 1:
        return v[0] * algebra.unit
    if v.size != algebra.dim:
        raise ConfigError(f"value needs {algebra.dim} coefficients")
    return v


def constant(b, algebra: StructureConstantAlgebra | None = None) -> Handle:
    algebra = b.algebra if isinstance(b, AlgebraElement) else (algebra or real_line())
    v = _vec(b, algebra)
    return Handle(lambda x: np.broadcast_to(v, (x.shape[0], v.size)), algebra, "constant", {"value": v.tolist()}, 0)


def affine(offset, coords: Sequence, algebra: StructureConstantAlgebra | None = None) -> Handle:
    """x -> offset + sum_k x_k * coords[k]."""
    algebra = algebra or real_line()
    b0 = _vec(offset, algebra)
    M = np.array([_vec(c, algebra) for c in coords]).reshape(len(coords), algebra.dim)
    return Handle(
        lambda x: b0 + x @ M, algebra, "affine", {"offset": b0.tolist(), "coords": M.tolist()}, 1
    )


def coordinate(k: int = 0) -> Handle:
    return Handle(lambda x: x[:, k : k + 1], real_line(), f"x{k}", {"axis": k}, 1)


def polynomial_1d(coeffs: Sequence[float], b=None, algebra=None) -> Handle:
    """x -> (sum_n c_n x^n) * b on the first coordinate; b defaults to the unit."""
    algebra = b.algebra if isinstance(b, AlgebraElement) else (algebra or real_line())
    bv = algebra.unit if b is None else _vec(b, algebra)
    c = np.asarray(coeffs, dtype=float)
    nz = np.flatnonzero(c)
    deg = int(nz[-1]) if nz.size else 0
    rev = c[::-1]
    return Handle(
        lambda x: np.polyval(rev, x[:, 0])[:, None] * bv, algebra, "polynomial-1d", {"coeffs": c.tolist()}, deg
    )


def _scalar1d(fn, name, params=None) -> Handle:
    return Handle(lambda x: fn(x[:, :1]), real_line(), name, params or {})


def exp(rate: float = 1.0) -> Handle:
    return _scalar1d(lambda t: np.exp(rate * t), "exp", {"rate": rate})


def sin(freq: float = 1.0) -> Handle:
    """sin(2 pi freq x)."""
    return _scalar1d(lambda t: np.sin(2 * np.pi * freq * t), "sin", {"freq": freq})


def cos(freq: float = 1.0) -> Handle:
    return _scalar1d(lambda t: np.cos(2 * np.pi * freq * t), "cos", {"freq": freq})


def sigma_restriction(sigma: AlgebraHom) -> Handle:
    """The point x of the domain box, read as an element of A, sent through sigma."""
    M = sigma.matrix.T
    return Handle(lambda x: x @ M, sigma.codomain, "sigma-restriction", {"hom": sigma.name}, 1)


def stack(handles: Sequence[Handle], algebra: StructureConstantAlgebra) -> Handle:
    """Real-valued handles as the coordinates of an R^m-valued one."""
    if len(handles) != algebra.dim:
        raise ConfigError("need one component handle per coordinate")
    degs = [h.degree for h in handles]
    deg = None if any(d is None for d in degs) else max(degs)
    return Handle(
        lambda x: np.concatenate([h(x) for h in handles], axis=1),
        algebra,
        "stack(" + ",".join(h.name for h in handles) + ")",
        degree=deg,
    )


def from_callable(fn: Callable, algebra: StructureConstantAlgebra | None = None, name: str = "custom") -> Handle:
    return Handle(fn, algebra or real_line(), name)


def build(spec: Mapping, algebra: StructureConstantAlgebra, sigma: AlgebraHom | None = None) -> Handle:
    """Handle from a parameter block such as {"kind": "polynomial-1d", "coeffs": [0, 0, 1]}."""
    kind = spec.get("kind")
    try:
        if kind == "constant":
            return constant(_value(spec["value"], algebra), algebra)
        if kind == "affine":
            return affine(_value(spec.get("offset", 0.0), algebra), [_value(c, algebra) for c in spec["coords"]], algebra)
        if kind == "polynomial-1d":
            b = spec.get("value")
            return polynomial_1d(spec["coeffs"], None if b is None else _value(b, algebra), algebra)
        if kind in ("exp", "sin", "cos"):
            if algebra.dim != 1:
                raise ConfigError(f"{kind} handles are real-valued")
            f = {"exp": exp, "sin": sin, "cos": cos}[kind]
            key = "rate" if kind == "exp" else "freq"
            return f(float(spec.get(key, 1.0)))
        if kind == "sigma-restriction":
            if sigma is None:
                raise ConfigError("sigma-restriction needs a homomorphism in the context")
            return sigma_restriction(sigma)
    except KeyError as e:
        raise ConfigError(f"handle {kind!r} is missing parameter {e}") from None
    raise ConfigError(f"unknown handle kind {kind!r}")


def _value(v, algebra):
    if isinstance(v, Mapping):
        return algebra.from_dict(v).coeffs
    return _vec(v, algebra)
