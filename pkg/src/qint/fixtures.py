"""Built-in algebras and homomorphisms."""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from .algebra import (
    AlgebraHom,
    RewriteRule,
    RewriteSystem,
    StructureConstantAlgebra,
    WeightQuiver,
    algebra_from_admissible_quiver,
    algebra_from_rewrite_system,
)

# ---------------------------------------------------------------- small algebras


@lru_cache(maxsize=None)
def real_line() -> StructureConstantAlgebra:
    return StructureConstantAlgebra(["1"], [[[1.0]]], [1.0], [[1.0]], name="real")


@lru_cache(maxsize=None)
def complex_plane() -> StructureConstantAlgebra:
    """The complex numbers as a 2-dim real algebra, built from a loop x with x^2 = -e."""
    q = WeightQuiver(["1"], [("i", "1", "1")])
    e, x = q.trivial("1"), q.path("i")
    rw = RewriteSystem([RewriteRule(q.path("i", "i"), [(e, -1.0)])], [e, x])
    return algebra_from_rewrite_system(q, rw, name="complex")


@lru_cache(maxsize=None)
def semisimple(n: int) -> StructureConstantAlgebra:
    """R^n with componentwise multiplication."""
    q = WeightQuiver([str(i + 1) for i in range(n)], [])
    return algebra_from_admissible_quiver(q, [], 1, name=f"R{n}")


@lru_cache(maxsize=None)
def linear_a3() -> StructureConstantAlgebra:
    q = WeightQuiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])
    return algebra_from_admissible_quiver(q, [], 3, name="linear-A3")


# ---------------------------------------------------------------- the worked 11/6-dim pair


def example7_quiver() -> WeightQuiver:
    return WeightQuiver(
        ["1", "2", "3"],
        [
            ("x1", "1", "1"),
            ("x2", "2", "2"),
            ("a", "1", "2"),
            ("a'", "1", "2"),
            ("b", "2", "3"),
            ("b'", "2", "3"),
            ("c", "3", "1"),
            ("c'", "3", "1"),
        ],
        weights={"1": 2, "2": 2, "3": 1},
    )


def example7_rewrite_system(q: WeightQuiver | None = None) -> RewriteSystem:
    q = q or example7_quiver()
    P = q.path
    e1, e2 = q.trivial("1"), q.trivial("2")
    rules = [
        RewriteRule(P("x1", "x1"), [(e1, -1.0)]),
        RewriteRule(P("x2", "x2"), [(e2, -1.0)]),
        RewriteRule(P("x1", "a"), [(P("a'"), 1.0)]),
        RewriteRule(P("a", "x2"), [(P("a'"), 1.0)]),
        RewriteRule(P("x1", "a'"), [(P("a"), -1.0)]),
        RewriteRule(P("a'", "x2"), [(P("a"), -1.0)]),
        RewriteRule(P("x2", "b"), [(P("b'"), 1.0)]),
        RewriteRule(P("x2", "b'"), [(P("b"), -1.0)]),
        RewriteRule(P("c", "x1"), [(P("c'"), 1.0)]),
        RewriteRule(P("c'", "x1"), [(P("c"), -1.0)]),
    ]
    for s, t in (("a", "b"), ("b", "c"), ("c", "a")):
        for u, v in product((s, s + "'"), (t, t + "'")):
            rules.append(RewriteRule(P(u, v), []))
    basis = [
        e1, P("x1"), e2, P("x2"), q.trivial("3"),
        P("a"), P("a'"), P("b"), P("b'"), P("c"), P("c'"),
    ]
    return RewriteSystem(rules, basis)


@lru_cache(maxsize=None)
def example7_A() -> StructureConstantAlgebra:
    q = example7_quiver()
    return algebra_from_rewrite_system(q, example7_rewrite_system(q), name="example7-A")


@lru_cache(maxsize=None)
def example7_B() -> StructureConstantAlgebra:
    q = WeightQuiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")])
    return algebra_from_admissible_quiver(q, [("a", "b"), ("b", "c"), ("c", "a")], 2, name="example7-B")


@lru_cache(maxsize=None)
def example7_sigma() -> AlgebraHom:
    """Linear projection killing x1, x2, a', b', c' and keeping the other basis paths.

    This map is unital but not multiplicative (x1*x1 = -e1 is not killed),
    so it is built without the homomorphism check and ``verify_hom`` flags it.
    """
    A, B = example7_A(), example7_B()
    keep = ["e1", "e2", "e3", "a", "b", "c"]
    return AlgebraHom.from_basis_map(A, B, {k: {k: 1.0} for k in keep}, check=False, name="example7-sigma")


@lru_cache(maxsize=None)
def corrupted_example7_A() -> StructureConstantAlgebra:
    """The 11-dim table with a*x2 changed from a' to a; associativity breaks."""
    A = example7_A()
    T = np.array(A.table)
    i, j = A.index("a"), A.index("x2")
    T[i, j, :] = 0.0
    T[i, j, A.index("a")] = 1.0
    return StructureConstantAlgebra(A.labels, T, A.unit, A.idempotents, name="example7-A-corrupted")


ALGEBRAS = {
    "real": real_line,
    "complex": complex_plane,
    "R2": lambda: semisimple(2),
    "R3": lambda: semisimple(3),
    "linear-A3": linear_a3,
    "example7-A": example7_A,
    "example7-B": example7_B,
    "example7-A-corrupted": corrupted_example7_A,
}


def algebra_fixture(name: str) -> StructureConstantAlgebra:
    try:
        return ALGEBRAS[name]()
    except KeyError:
        raise KeyError(f"unknown algebra fixture {name!r}; known: {sorted(ALGEBRAS)}") from None


@lru_cache(maxsize=None)
def path_square_sigma() -> AlgebraHom:
    """R^2 -> example7-B sending the two idempotents to e1+e2 and e3."""
    return AlgebraHom.from_basis_map(
        semisimple(2), example7_B(), {"e1": {"e1": 1.0, "e2": 1.0}, "e2": {"e3": 1.0}}, name="path-square"
    )


@lru_cache(maxsize=None)
def unit_scaled_hom() -> AlgebraHom:
    """A hom that breaks unitality: sends the unit of R to 0."""
    return AlgebraHom(real_line(), real_line(), [[0.0]], check=False, name="zero-unit")


HOMS = {
    "example7-sigma": example7_sigma,
    "path-square": path_square_sigma,
    "identity-real": lambda: AlgebraHom(real_line(), real_line(), [[1.0]], name="identity-real"),
    "identity-complex": lambda: AlgebraHom(complex_plane(), complex_plane(), np.eye(2), name="identity-complex"),
    "zero-unit": unit_scaled_hom,
}


def hom_fixture(name: str) -> AlgebraHom:
    try:
        return HOMS[name]()
    except KeyError:
        raise KeyError(f"unknown hom fixture {name!r}; known: {sorted(HOMS)}") from None
