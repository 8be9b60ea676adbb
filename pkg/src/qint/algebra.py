"""Finite-dimensional real algebras given by quivers with relations or by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    AlgebraMismatch,
    AssociativityFailure,
    CutoffTooSmall,
    InvalidQuiver,
    InvalidRelation,
    NonTerminating,
    NotClosed,
)
from .report import Check, LawReport

TAU_ALG = 1e-9


# ---------------------------------------------------------------- quivers


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Path:
    """A path in a quiver. Length-0 paths carry only their vertex."""

    arrows: tuple[str, ...]
    src: str
    tgt: str

    def __len__(self) -> int:
        return len(self.arrows)

    @property
    def label(self) -> str:
        if not self.arrows:
            return f"e{self.src}"
        return "".join(self.arrows)


class WeightQuiver:
    """Directed multigraph with a positive integer weight per vertex.

    Weights are carried as metadata; over the reals they play no role in
    the multiplication.
    """

    def __init__(
        self,
        vertices: Iterable,
        arrows: Iterable[tuple[str, object, object] | Arrow],
        weights: Mapping | None = None,
    ):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidQuiver("duplicate vertex ids")
        arr = []
        for a in arrows:
            a = a if isinstance(a, Arrow) else Arrow(str(a[0]), str(a[1]), str(a[2]))
            if a.src not in self.vertices or a.tgt not in self.vertices:
                raise InvalidQuiver(f"arrow {a.id!r} references an unknown vertex")
            arr.append(a)
        self.arrows = tuple(arr)
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise InvalidQuiver("duplicate arrow ids")
        if set(ids) & set(self.vertices):
            raise InvalidQuiver("arrow ids must differ from vertex ids")
        self._by_id = {a.id: a for a in self.arrows}
        w = {str(k): int(v) for k, v in (weights or {}).items()}
        for v in self.vertices:
            w.setdefault(v, 1)
        if set(w) != set(self.vertices):
            raise InvalidQuiver("weights given for unknown vertices")
        if any(x < 1 for x in w.values()):
            raise InvalidQuiver("vertex weights must be >= 1")
        self.weights = w

    def arrow(self, aid: str) -> Arrow:
        try:
            return self._by_id[aid]
        except KeyError:
            raise InvalidRelation(f"unknown arrow {aid!r}") from None

    def trivial(self, v) -> Path:
        v = str(v)
        if v not in self.vertices:
            raise InvalidRelation(f"unknown vertex {v!r}")
        return Path((), v, v)

    def path(self, *arrow_ids: str) -> Path:
        """Build a path from arrow ids, checking that consecutive arrows compose."""
        if not arrow_ids:
            raise InvalidRelation("use trivial(v) for length-0 paths")
        arrows = [self.arrow(a) for a in arrow_ids]
        for x, y in zip(arrows, arrows[1:]):
            if x.tgt != y.src:
                raise InvalidRelation(f"arrows {x.id!r} and {y.id!r} do not compose")
        return Path(tuple(arrow_ids), arrows[0].src, arrows[-1].tgt)

    def __repr__(self) -> str:
        return f"WeightQuiver(vertices={list(self.vertices)}, arrows={[a.id for a in self.arrows]})"


def compose(p: Path, q: Path) -> Path | None:
    """Left-to-right concatenation; None when the target of p is not the source of q."""
    if p.tgt != q.src:
        return None
    return Path(p.arrows + q.arrows, p.src, q.tgt)


def enumerate_paths(quiver: WeightQuiver, max_len: int) -> list[Path]:
    """All paths of length <= max_len, shortest first, then lexicographic in arrow ids."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    layer = [quiver.trivial(v) for v in quiver.vertices]
    out = list(layer)
    for _ in range(max_len):
        nxt = []
        for p in layer:
            for a in quiver.arrows:
                if a.src == p.tgt:
                    nxt.append(Path(p.arrows + (a.id,), p.src, a.tgt))
        nxt.sort(key=lambda p: p.arrows)
        out.extend(nxt)
        layer = nxt
        if not layer:
            break
    return out


def _contains(word: tuple, sub: tuple) -> bool:
    n = len(sub)
    return any(word[i : i + n] == sub for i in range(len(word) - n + 1))


# ---------------------------------------------------------------- algebras


class StructureConstantAlgebra:
    """Real algebra with basis e_0..e_{n-1} and e_i e_j = sum_k table[i, j, k] e_k."""

    def __init__(
        self,
        labels: Sequence[str],
        table,
        unit,
        idempotents=None,
        name: str | None = None,
        basis_paths: Sequence[Path] | None = None,
    ):
        self.labels = tuple(labels)
        n = len(self.labels)
        if n == 0:
            raise ValueError("an algebra needs at least one basis element")
        if len(set(self.labels)) != n:
            raise ValueError("basis labels must be unique")
        t = np.array(table, dtype=float)
        if t.shape != (n, n, n):
            raise ValueError(f"table has shape {t.shape}, expected {(n, n, n)}")
        t.setflags(write=False)
        self.table = t
        u = np.array(unit, dtype=float)
        if u.shape != (n,):
            raise ValueError("unit has the wrong length")
        u.setflags(write=False)
        self.unit = u
        if idempotents is not None:
            idem = np.array(idempotents, dtype=float).reshape(-1, n)
            idem.setflags(write=False)
            self.idempotents = idem
        else:
            self.idempotents = None
        self.name = name or f"alg{n}"
        self.basis_paths = tuple(basis_paths) if basis_paths is not None else None
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a basis label of {self.name}") from None

    # element construction
    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def basis(self, label: str | int) -> "AlgebraElement":
        i = label if isinstance(label, (int, np.integer)) else self.index(label)
        c = np.zeros(self.dim)
        c[i] = 1.0
        return AlgebraElement(self, c)

    def from_dict(self, d: Mapping[str, float]) -> "AlgebraElement":
        c = np.zeros(self.dim)
        for k, v in d.items():
            c[self.index(k)] += float(v)
        return AlgebraElement(self, c)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.dim))

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit)

    # raw coefficient arithmetic, broadcasting over leading axes
    def mul_coeffs(self, x, y) -> np.ndarray:
        return np.einsum("...i,...j,ijk->...k", x, y, self.table)

    def left_matrix(self, x) -> np.ndarray:
        """M with y @ M == coefficients of x*y."""
        return np.einsum("i,ijk->jk", np.asarray(x, dtype=float), self.table)

    def right_matrix(self, y) -> np.ndarray:
        """M with x @ M == coefficients of x*y."""
        return np.einsum("j,ijk->ik", np.asarray(y, dtype=float), self.table)

    def __repr__(self) -> str:
        return f"StructureConstantAlgebra({self.name!r}, dim={self.dim})"


class AlgebraElement:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: StructureConstantAlgebra, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.shape != (algebra.dim,):
            raise AlgebraMismatch(f"expected {algebra.dim} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        self.algebra = algebra
        self.coeffs = c

    def _same(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            raise AlgebraMismatch("operands live in different algebras")

    def __add__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._same(other)
        return AlgebraElement(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self):
        return AlgebraElement(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._same(other)
            return AlgebraElement(self.algebra, self.algebra.mul_coeffs(self.coeffs, other.coeffs))
        if np.isscalar(other):
            return AlgebraElement(self.algebra, float(other) * self.coeffs)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.algebra, float(other) * self.coeffs)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.algebra, self.coeffs / float(other))
        return NotImplemented

    def allclose(self, other: "AlgebraElement", atol: float = TAU_ALG) -> bool:
        self._same(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= atol)

    def to_dict(self, drop_zeros: bool = False) -> dict[str, float]:
        return {
            lab: float(c)
            for lab, c in zip(self.algebra.labels, self.coeffs)
            if not (drop_zeros and c == 0)
        }

    def __repr__(self) -> str:
        terms = [f"{c:g}*{lab}" for lab, c in zip(self.algebra.labels, self.coeffs) if c != 0]
        return " + ".join(terms) if terms else "0"


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x + y


def scale(lam: float, x: AlgebraElement) -> AlgebraElement:
    return lam * x


class AlgebraHom:
    """Linear map between algebras given by a (codomain dim x domain dim) matrix.

    Multiplicativity and unitality are checked at construction unless
    ``check=False``; the zero map used for vector-valued integration is
    one of the legitimate uses of skipping the check.
    """

    def __init__(self, domain, codomain, matrix, check: bool = True, name: str | None = None):
        m = np.array(matrix, dtype=float)
        if m.shape != (codomain.dim, domain.dim):
            raise AlgebraMismatch(f"matrix shape {m.shape}, expected {(codomain.dim, domain.dim)}")
        m.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.matrix = m
        self.name = name or f"{domain.name}->{codomain.name}"
        if check:
            rep = verify_hom(self)
            if not rep.ok:
                raise AlgebraMismatch(f"not an algebra homomorphism: {rep.summary()}")

    @classmethod
    def from_basis_map(cls, domain, codomain, images: Mapping[str, Mapping[str, float]], **kw):
        m = np.zeros((codomain.dim, domain.dim))
        for src, img in images.items():
            j = domain.index(src)
            for lab, c in img.items():
                m[codomain.index(lab), j] += float(c)
        return cls(domain, codomain, m, **kw)

    def apply_coeffs(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.matrix.T

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        return apply_hom(self, x)

    def __repr__(self) -> str:
        return f"AlgebraHom({self.name!r})"


def apply_hom(h: AlgebraHom, x: AlgebraElement) -> AlgebraElement:
    if x.algebra is not h.domain:
        raise AlgebraMismatch("element is not in the domain of the map")
    return AlgebraElement(h.codomain, h.matrix @ x.coeffs)


def kernel_basis(h: AlgebraHom, tol: float = TAU_ALG) -> np.ndarray:
    """Rows form an orthonormal basis of Ker(h), found by SVD rank revelation."""
    ns = scipy.linalg.null_space(h.matrix, rcond=tol)
    return ns.T


# ---------------------------------------------------------------- verification


def _argmax_witness(resid: np.ndarray, labels: Sequence[str]):
    if resid.size == 0:
        return 0.0, None
    idx = np.unravel_index(int(np.argmax(resid)), resid.shape)
    return float(resid[idx]), tuple(labels[i] for i in idx)


def verify_algebra(alg: StructureConstantAlgebra, tol: float = TAU_ALG) -> LawReport:
    T = alg.table
    # ((e_i e_j) e_k) - (e_i (e_j e_k)), per output coordinate
    lhs = np.einsum("ijl,lkm->ijkm", T, T)
    rhs = np.einsum("jkl,ilm->ijkm", T, T)
    assoc = np.max(np.abs(lhs - rhs), axis=3)
    checks = []
    r, w = _argmax_witness(assoc, alg.labels)
    checks.append(Check("associativity", r, tol, w))

    eye = np.eye(alg.dim)
    left = np.abs(np.einsum("i,ijk->jk", alg.unit, T) - eye).max(axis=1)
    right = np.abs(np.einsum("j,ijk->ik", alg.unit, T) - eye).max(axis=1)
    r, w = _argmax_witness(left, alg.labels)
    checks.append(Check("left_unit", r, tol, w))
    r, w = _argmax_witness(right, alg.labels)
    checks.append(Check("right_unit", r, tol, w))

    if alg.idempotents is not None:
        E = alg.idempotents
        prods = alg.mul_coeffs(E[:, None, :], E[None, :, :])
        target = np.zeros_like(prods)
        k = len(E)
        target[np.arange(k), np.arange(k)] = E
        resid = np.abs(prods - target).max(axis=2)
        idx = np.unravel_index(int(np.argmax(resid)), resid.shape)
        checks.append(Check("orthogonal_idempotents", float(resid[idx]), tol, tuple(int(i) for i in idx)))
        checks.append(Check("idempotents_sum_to_unit", float(np.abs(E.sum(axis=0) - alg.unit).max()), tol))
    return LawReport(f"algebra {alg.name}", checks)


def verify_hom(h: AlgebraHom, tol: float = TAU_ALG) -> LawReport:
    A, B, M = h.domain, h.codomain, h.matrix
    unit_res = float(np.abs(M @ A.unit - B.unit).max())
    # h(e_i e_j) vs h(e_i) h(e_j)
    img = M.T  # row i = h(e_i)
    lhs = np.einsum("ijk,mk->ijm", A.table, M)
    rhs = B.mul_coeffs(img[:, None, :], img[None, :, :])
    resid = np.abs(lhs - rhs).max(axis=2)
    r, w = _argmax_witness(resid, A.labels)
    return LawReport(
        f"hom {h.name}",
        [Check("unital", unit_res, tol, None), Check("multiplicative", r, tol, w)],
    )


# ---------------------------------------------------------------- constructions


def _trivial_idempotents(basis: Sequence[Path]) -> np.ndarray:
    n = len(basis)
    rows = []
    for i, p in enumerate(basis):
        if not p.arrows:
            r = np.zeros(n)
            r[i] = 1.0
            rows.append(r)
    return np.array(rows)


def _table_from_products(basis: Sequence[Path], product) -> np.ndarray:
    n = len(basis)
    T = np.zeros((n, n, n))
    for i, p in enumerate(basis):
        for j, q in enumerate(basis):
            for k, c in product(p, q).items():
                T[i, j, k] += c
    return T


def algebra_from_admissible_quiver(
    quiver: WeightQuiver,
    monomial_relations: Sequence[Path | Sequence[str]],
    nilpotency_cutoff: int,
    name: str | None = None,
    check: bool = True,
) -> StructureConstantAlgebra:
    """Path algebra modulo monomial relations, with every path of length >= cutoff zero."""
    rels = []
    for r in monomial_relations:
        arrows = r.arrows if isinstance(r, Path) else tuple(r)
        if not arrows:
            raise InvalidRelation("a length-0 path cannot be a monomial relation")
        quiver.path(*arrows)  # raises if not composable
        rels.append(arrows)
    if nilpotency_cutoff < 1:
        raise CutoffTooSmall("cutoff must be at least 1")

    def killed(p: Path) -> bool:
        return any(_contains(p.arrows, r) for r in rels)

    paths = enumerate_paths(quiver, nilpotency_cutoff)
    for p in paths:
        if len(p) == nilpotency_cutoff and not killed(p):
            raise CutoffTooSmall(f"path {p.label} of length {nilpotency_cutoff} survives the relations")
    basis = [p for p in paths if len(p) < nilpotency_cutoff and not killed(p)]
    index = {p: i for i, p in enumerate(basis)}

    def product(p, q):
        r = compose(p, q)
        return {index[r]: 1.0} if r is not None and r in index else {}

    n = len(basis)
    T = _table_from_products(basis, product)
    unit = np.zeros(n)
    for i, p in enumerate(basis):
        if not p.arrows:
            unit[i] = 1.0
    alg = StructureConstantAlgebra(
        [p.label for p in basis], T, unit, _trivial_idempotents(basis), name=name, basis_paths=basis
    )
    if check:
        rep = verify_algebra(alg)
        if not rep.ok:
            raise AssociativityFailure(rep.summary())
    return alg


@dataclass
class RewriteRule:
    lhs: Path
    rhs: list[tuple[Path, float]]


@dataclass
class RewriteSystem:
    """Rules rewriting a path into a linear combination, plus the declared normal-form basis."""

    rules: list[RewriteRule]
    basis: list[Path]
    _lookup: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        for rule in self.rules:
            if not rule.lhs.arrows:
                raise InvalidRelation("rule left-hand sides must be non-trivial paths")
            if rule.lhs.arrows in self._lookup:
                raise InvalidRelation(f"duplicate rule for {rule.lhs.label}")
            for p, _ in rule.rhs:
                if (p.src, p.tgt) != (rule.lhs.src, rule.lhs.tgt):
                    raise InvalidRelation(
                        f"rule {rule.lhs.label} -> {p.label} changes the endpoints of the path"
                    )
            self._lookup[rule.lhs.arrows] = rule
        self._lengths = sorted({len(r.lhs) for r in self.rules})
        if len(set(self.basis)) != len(self.basis):
            raise InvalidRelation("normal-form basis has duplicates")

    def find(self, word: tuple[str, ...]):
        """Leftmost (then shortest) rule occurrence in the word."""
        for pos in range(len(word)):
            for L in self._lengths:
                if pos + L > len(word):
                    break
                rule = self._lookup.get(word[pos : pos + L])
                if rule is not None:
                    return pos, rule
        return None

    def reduce(self, quiver: WeightQuiver, terms: Mapping[Path, float], max_steps: int) -> dict[Path, float]:
        out: dict[Path, float] = {}
        work = list(terms.items())
        steps = 0
        while work:
            path, c = work.pop()
            if c == 0:
                continue
            hit = self.find(path.arrows)
            if hit is None:
                out[path] = out.get(path, 0.0) + c
                continue
            steps += 1
            if steps > max_steps:
                raise NonTerminating(f"reduction exceeded {max_steps} steps")
            pos, rule = hit
            L = len(rule.lhs)
            for rp, rc in rule.rhs:
                word = path.arrows[:pos] + rp.arrows + path.arrows[pos + L :]
                if word:
                    new = quiver.path(*word)
                else:
                    new = quiver.trivial(path.src)
                work.append((new, c * rc))
        return {p: c for p, c in out.items() if c != 0}


def algebra_from_rewrite_system(
    quiver: WeightQuiver,
    rw: RewriteSystem,
    max_reduction_steps: int = 10_000,
    name: str | None = None,
    check: bool = True,
) -> StructureConstantAlgebra:
    index = {p: i for i, p in enumerate(rw.basis)}

    def product(p, q):
        r = compose(p, q)
        if r is None:
            return {}
        red = rw.reduce(quiver, {r: 1.0}, max_reduction_steps)
        out = {}
        for path, c in red.items():
            if path not in index:
                raise NotClosed(f"{p.label}*{q.label} reduces to {path.label}, outside the declared basis")
            out[index[path]] = c
        return out

    T = _table_from_products(rw.basis, product)
    n = len(rw.basis)
    unit = np.zeros(n)
    for v in quiver.vertices:
        e = quiver.trivial(v)
        if e not in index:
            raise NotClosed(f"trivial path {e.label} missing from the normal-form basis")
        unit[index[e]] = 1.0
    alg = StructureConstantAlgebra(
        [p.label for p in rw.basis], T, unit, _trivial_idempotents(rw.basis), name=name, basis_paths=rw.basis
    )
    if check:
        rep = verify_algebra(alg)
        if not rep.ok:
            raise AssociativityFailure(rep.summary())
    return alg


def reorder(alg: StructureConstantAlgebra, labels: Sequence[str]) -> StructureConstantAlgebra:
    """Same algebra with its basis permuted into the given label order."""
    perm = [alg.index(l) for l in labels]
    T = alg.table[np.ix_(perm, perm, perm)]
    idem = None if alg.idempotents is None else alg.idempotents[:, perm]
    return StructureConstantAlgebra(labels, T, alg.unit[perm], idem, name=alg.name)
