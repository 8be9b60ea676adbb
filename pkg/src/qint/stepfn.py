"""Algebra-valued step functions on a product interval.

A step function is a finite sum of coefficients times indicators of
pairwise disjoint axis-aligned boxes.  Each box edge carries an open or
closed flag, and splits follow a half-open rule: the lower piece is
[lo, cut) and only the global upper face of the domain is closed.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import AlgebraElement, AlgebraHom, StructureConstantAlgebra
from .errors import (
    AlgebraMismatch,
    ArityMismatch,
    BudgetExceeded,
    DomainMismatch,
    InvalidPieces,
    NotAligned,
    OutOfDomain,
)
from .norms import PNormSpec

DEFAULT_CELL_BUDGET = 2**24


def cell_budget() -> int:
    env = os.environ.get("QINT_CELL_BUDGET")
    if env:
        try:
            return int(float(env))
        except ValueError:
            raise ValueError(f"QINT_CELL_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_CELL_BUDGET


# ---------------------------------------------------------------- domain


class Domain:
    """The box [c, d]^dim (per-axis endpoints allowed) with split point xi on each axis."""

    def __init__(self, lo, hi, xi=None):
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        lo, hi = np.broadcast_arrays(lo, hi)
        xi = (lo + hi) / 2 if xi is None else np.broadcast_to(np.asarray(xi, dtype=float), lo.shape)
        if lo.ndim != 1 or lo.size < 1:
            raise ValueError("domain endpoints must be 1-d with at least one axis")
        if not np.all(lo < xi) or not np.all(xi < hi):
            raise ValueError("need c < xi < d on every axis")
        self.lo, self.hi, self.xi = (np.array(a, dtype=float) for a in (lo, hi, xi))
        for a in (self.lo, self.hi, self.xi):
            a.setflags(write=False)

    @classmethod
    def cube(cls, dim: int, c: float = 0.0, d: float = 1.0, xi: float | None = None) -> "Domain":
        return cls(np.full(dim, c), np.full(dim, d), None if xi is None else np.full(dim, xi))

    @property
    def dim(self) -> int:
        return self.lo.size

    @property
    def measure(self) -> float:
        return float(np.prod(self.hi - self.lo))

    def same_as(self, other: "Domain") -> bool:
        return (
            np.array_equal(self.lo, other.lo)
            and np.array_equal(self.hi, other.hi)
            and np.array_equal(self.xi, other.xi)
        )

    def signatures(self) -> list[tuple[int, ...]]:
        """Corner signatures in {0,1}^dim (0 for the c side), lexicographic."""
        return list(product((0, 1), repeat=self.dim))

    def subbox(self, sig: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        s = np.asarray(sig, dtype=bool)
        return np.where(s, self.xi, self.lo), np.where(s, self.hi, self.xi)

    def subbox_measures(self) -> np.ndarray:
        out = []
        for sig in self.signatures():
            lo, hi = self.subbox(sig)
            out.append(float(np.prod(hi - lo)))
        return np.array(out)

    # affine order-preserving bijections [c,d] -> [c,xi] and [c,d] -> [xi,d]
    def kappa(self, sig, t) -> np.ndarray:
        s = np.asarray(sig, dtype=bool)
        c, d, xi = self.lo, self.hi, self.xi
        left = c + (t - c) * ((xi - c) / (d - c))
        right = xi + (t - c) * ((d - xi) / (d - c))
        out = np.where(s, right, left)
        # pin the images of the endpoints exactly
        out = np.where(t == c, np.where(s, xi, c), out)
        out = np.where(t == d, np.where(s, d, xi), out)
        return out

    def kappa_inv(self, sig, t) -> np.ndarray:
        s = np.asarray(sig, dtype=bool)
        c, d, xi = self.lo, self.hi, self.xi
        left = c + (t - c) * ((d - c) / (xi - c))
        right = c + (t - xi) * ((d - c) / (d - xi))
        out = np.where(s, right, left)
        out = np.where(s, np.where(t == xi, c, out), np.where(t == xi, d, out))
        out = np.where(s, np.where(t == d, d, out), np.where(t == c, c, out))
        return out

    def breakpoints(self, u: int) -> list[np.ndarray]:
        """Per-axis cell boundaries of the level-u dyadic-by-xi grid (2^u + 1 points)."""
        out = []
        for k in range(self.dim):
            c, d, xi = self.lo[k], self.hi[k], self.xi[k]
            pts = np.array([c, d])
            for _ in range(u):
                left = c + (pts - c) * ((xi - c) / (d - c))
                right = xi + (pts - c) * ((d - xi) / (d - c))
                left[0], left[-1] = c, xi
                right[0], right[-1] = xi, d
                pts = np.concatenate([left, right[1:]])
            out.append(pts)
        return out

    def to_dict(self) -> dict:
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist(), "xi": self.xi.tolist()}

    def __repr__(self) -> str:
        if np.all(self.lo == self.lo[0]) and np.all(self.hi == self.hi[0]) and np.all(self.xi == self.xi[0]):
            return f"Domain([{self.lo[0]:g},{self.hi[0]:g}]^{self.dim}, xi={self.xi[0]:g})"
        return f"Domain(lo={self.lo.tolist()}, hi={self.hi.tolist()}, xi={self.xi.tolist()})"


@dataclass(frozen=True)
class Box:
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    lo_closed: tuple[bool, ...]
    hi_closed: tuple[bool, ...]

    @classmethod
    def make(cls, lo, hi, flags: str | Sequence[str] = "co") -> "Box":
        """Flags per axis as 'co', 'cc', 'oc' or 'oo' (lower then upper end)."""
        lo = tuple(float(x) for x in np.atleast_1d(lo))
        hi = tuple(float(x) for x in np.atleast_1d(hi))
        if isinstance(flags, str):
            flags = [flags] * len(lo)
        if len(flags) != len(lo) or len(hi) != len(lo):
            raise ValueError("box endpoint lists differ in length")
        for f in flags:
            if f not in ("co", "cc", "oc", "oo"):
                raise ValueError(f"bad endpoint flag {f!r}")
        return cls(lo, hi, tuple(f[0] == "c" for f in flags), tuple(f[1] == "c" for f in flags))

    @property
    def flags(self) -> list[str]:
        return [("c" if a else "o") + ("c" if b else "o") for a, b in zip(self.lo_closed, self.hi_closed)]

    @property
    def measure(self) -> float:
        return float(np.prod(np.subtract(self.hi, self.lo)))


# ---------------------------------------------------------------- interval helpers


def _nonempty(lo, hi, lc, hc) -> np.ndarray:
    """Whether each box (rows) is a nonempty set; arrays of shape (..., d)."""
    return np.all((lo < hi) | ((lo == hi) & lc & hc), axis=-1)


def _intersect(lo1, hi1, lc1, hc1, lo2, hi2, lc2, hc2):
    lo = np.maximum(lo1, lo2)
    lc = np.where(lo1 > lo2, lc1, np.where(lo2 > lo1, lc2, lc1 & lc2))
    hi = np.minimum(hi1, hi2)
    hc = np.where(hi1 < hi2, hc1, np.where(hi2 < hi1, hc2, hc1 & hc2))
    return lo, hi, lc, hc


def _contains(lo, hi, lc, hc, x) -> np.ndarray:
    """Membership of points x (m, d) in boxes (k, d); returns (m, k)."""
    x = x[:, None, :]
    above = np.where(lc, x >= lo, x > lo)
    below = np.where(hc, x <= hi, x < hi)
    return np.all(above & below, axis=-1)


def _box_minus(box, other):
    """Pieces of box minus other, for single boxes given as 4-tuples of (d,) arrays.

    Peels slabs off one axis at a time; the result pieces are disjoint.
    """
    lo, hi, lc, hc = (np.array(a) for a in box)
    olo, ohi, olc, ohc = _intersect(*box, *other)
    if not _nonempty(olo, ohi, olc, ohc):
        return [box]
    pieces = []
    for k in range(lo.size):
        # slab below the intersection on axis k
        b_lo, b_hi, b_lc, b_hc = lo.copy(), hi.copy(), lc.copy(), hc.copy()
        b_hi[k], b_hc[k] = olo[k], not olc[k]
        if _nonempty(b_lo, b_hi, b_lc, b_hc):
            pieces.append((b_lo, b_hi, b_lc, b_hc))
        # slab above
        a_lo, a_hi, a_lc, a_hc = lo.copy(), hi.copy(), lc.copy(), hc.copy()
        a_lo[k], a_lc[k] = ohi[k], not ohc[k]
        if _nonempty(a_lo, a_hi, a_lc, a_hc):
            pieces.append((a_lo, a_hi, a_lc, a_hc))
        # keep only the intersection's extent on axis k for later axes
        lo[k], hi[k], lc[k], hc[k] = olo[k], ohi[k], olc[k], ohc[k]
    return pieces


# ---------------------------------------------------------------- step functions


class StepFunction:
    """Sum of b_i 1_{I_i} with disjoint boxes I_i, stored as parallel arrays.

    ``lo``, ``hi`` have shape (k, d); ``lc``, ``hc`` are the closed flags;
    ``coeffs`` has shape (k, dim B).
    """

    __slots__ = ("domain", "algebra", "lo", "hi", "lc", "hc", "coeffs")

    def __init__(self, domain: Domain, algebra: StructureConstantAlgebra, lo, hi, lc, hc, coeffs, validate=False):
        d, n = domain.dim, algebra.dim
        lo = np.asarray(lo, dtype=float).reshape(-1, d)
        k = lo.shape[0]
        hi = np.asarray(hi, dtype=float).reshape(k, d)
        lc = np.asarray(lc, dtype=bool).reshape(k, d)
        hc = np.asarray(hc, dtype=bool).reshape(k, d)
        coeffs = np.asarray(coeffs, dtype=float).reshape(k, n)
        for a in (lo, hi, lc, hc, coeffs):
            a.setflags(write=False)
        self.domain, self.algebra = domain, algebra
        self.lo, self.hi, self.lc, self.hc, self.coeffs = lo, hi, lc, hc, coeffs
        if validate:
            self.validate()

    # construction
    @classmethod
    def from_pieces(cls, domain: Domain, algebra, pieces: Iterable[tuple[Box, AlgebraElement | Sequence[float]]]):
        los, his, lcs, hcs, cs = [], [], [], [], []
        for box, b in pieces:
            if isinstance(b, AlgebraElement):
                if b.algebra is not algebra:
                    raise AlgebraMismatch("piece coefficient is over a different algebra")
                b = b.coeffs
            los.append(box.lo)
            his.append(box.hi)
            lcs.append(box.lo_closed)
            hcs.append(box.hi_closed)
            cs.append(b)
        d, n = domain.dim, algebra.dim
        if not los:
            return cls.zero(domain, algebra)
        return cls(domain, algebra, los, his, lcs, hcs, np.reshape(cs, (-1, n)), validate=True)

    @classmethod
    def zero(cls, domain: Domain, algebra) -> "StepFunction":
        d, n = domain.dim, algebra.dim
        e = np.zeros((0, d))
        return cls(domain, algebra, e, e, e.astype(bool), e.astype(bool), np.zeros((0, n)))

    @classmethod
    def constant(cls, domain: Domain, b: AlgebraElement) -> "StepFunction":
        """b times the indicator of the whole closed domain."""
        d = domain.dim
        return cls(domain, b.algebra, domain.lo, domain.hi, np.ones(d, bool), np.ones(d, bool), b.coeffs)

    @classmethod
    def indicator(cls, domain: Domain, box: Box, b: AlgebraElement) -> "StepFunction":
        return cls.from_pieces(domain, b.algebra, [(box, b)])

    def validate(self) -> None:
        dom = self.domain
        if np.any(self.lo > self.hi):
            raise InvalidPieces("a box has lo > hi")
        if np.any(self.lo < dom.lo) or np.any(self.hi > dom.hi):
            raise InvalidPieces("a box leaves the domain")
        k = len(self)
        if k > 1:
            for i in range(k - 1):
                ilo, ihi, ilc, ihc = _intersect(
                    self.lo[i], self.hi[i], self.lc[i], self.hc[i],
                    self.lo[i + 1 :], self.hi[i + 1 :], self.lc[i + 1 :], self.hc[i + 1 :],
                )
                hit = _nonempty(ilo, ihi, ilc, ihc)
                if np.any(hit):
                    j = i + 1 + int(np.argmax(hit))
                    raise InvalidPieces(f"pieces {i} and {j} overlap")

    def __len__(self) -> int:
        return self.lo.shape[0]

    @property
    def pieces(self) -> list[tuple[Box, AlgebraElement]]:
        out = []
        for i in range(len(self)):
            box = Box(tuple(self.lo[i]), tuple(self.hi[i]), tuple(bool(x) for x in self.lc[i]), tuple(bool(x) for x in self.hc[i]))
            out.append((box, AlgebraElement(self.algebra, self.coeffs[i])))
        return out

    def measures(self) -> np.ndarray:
        return np.prod(self.hi - self.lo, axis=1)

    def _compatible(self, other: "StepFunction") -> None:
        if not self.domain.same_as(other.domain):
            raise DomainMismatch("step functions live on different domains")
        if self.algebra is not other.algebra:
            raise DomainMismatch("step functions take values in different algebras")

    def with_coeffs(self, coeffs) -> "StepFunction":
        return StepFunction(self.domain, self.algebra, self.lo, self.hi, self.lc, self.hc, coeffs)

    # evaluation
    def evaluate_many(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1, self.domain.dim)
        if np.any(x < self.domain.lo) or np.any(x > self.domain.hi):
            raise OutOfDomain("point outside the domain box")
        if len(self) == 0:
            return np.zeros((x.shape[0], self.algebra.dim))
        inside = _contains(self.lo, self.hi, self.lc, self.hc, x)
        return inside.astype(float) @ self.coeffs

    def __call__(self, x) -> AlgebraElement:
        return evaluate(self, x)

    # arithmetic
    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return self.with_coeffs(-self.coeffs)

    def __sub__(self, other):
        return add(self, -other)

    def __mul__(self, lam):
        if np.isscalar(lam):
            return self.with_coeffs(float(lam) * self.coeffs)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"StepFunction({len(self)} pieces on {self.domain}, values in {self.algebra.name})"


def evaluate(f: StepFunction, x) -> AlgebraElement:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (f.domain.dim,):
        raise OutOfDomain(f"expected a point with {f.domain.dim} coordinates")
    return AlgebraElement(f.algebra, f.evaluate_many(x[None, :])[0])


def module_action(a: AlgebraElement | None, f: StepFunction, b: AlgebraElement | None, sigma: AlgebraHom) -> StepFunction:
    """a.f.b with a acting through sigma on the left and b on the right; None means the unit."""
    if sigma.codomain is not f.algebra:
        raise AlgebraMismatch("sigma does not land in the value algebra of f")
    B = f.algebra
    c = f.coeffs
    if a is not None:
        if a.algebra is not sigma.domain:
            raise AlgebraMismatch("left factor is not in the domain of sigma")
        c = c @ B.left_matrix(sigma.matrix @ a.coeffs)
    if b is not None:
        if b.algebra is not B:
            raise AlgebraMismatch("right factor is not in the value algebra")
        c = c @ B.right_matrix(b.coeffs)
    return f.with_coeffs(c)


def add(f: StepFunction, g: StepFunction) -> StepFunction:
    """Sum as a new disjoint piece list: f-only parts, g-only parts and overlaps."""
    f._compatible(g)
    if len(f) == 0:
        return g
    if len(g) == 0:
        return f
    if (
        len(f) == len(g)
        and np.array_equal(f.lo, g.lo)
        and np.array_equal(f.hi, g.hi)
        and np.array_equal(f.lc, g.lc)
        and np.array_equal(f.hc, g.hc)
    ):
        return f.with_coeffs(f.coeffs + g.coeffs)

    ilo, ihi, ilc, ihc = _intersect(
        f.lo[:, None], f.hi[:, None], f.lc[:, None], f.hc[:, None],
        g.lo[None], g.hi[None], g.lc[None], g.hc[None],
    )
    hit = _nonempty(ilo, ihi, ilc, ihc)  # (kf, kg)

    los, his, lcs, hcs, cs = [], [], [], [], []

    def only(src: StepFunction, other: StepFunction, hits: np.ndarray):
        for i in range(len(src)):
            rem = [(src.lo[i], src.hi[i], src.lc[i], src.hc[i])]
            for j in np.flatnonzero(hits[i]):
                ob = (other.lo[j], other.hi[j], other.lc[j], other.hc[j])
                rem = [piece for r in rem for piece in _box_minus(r, ob)]
                if not rem:
                    break
            for r in rem:
                los.append(r[0]); his.append(r[1]); lcs.append(r[2]); hcs.append(r[3])
                cs.append(src.coeffs[i])

    only(f, g, hit)
    ii, jj = np.nonzero(hit)
    for i, j in zip(ii, jj):
        los.append(ilo[i, j]); his.append(ihi[i, j]); lcs.append(ilc[i, j]); hcs.append(ihc[i, j])
        cs.append(f.coeffs[i] + g.coeffs[j])
    only(g, f, hit.T)
    return StepFunction(f.domain, f.algebra, los, his, lcs, hcs, np.reshape(cs, (-1, f.algebra.dim)))


def step_norm(f: StepFunction, spec: PNormSpec) -> float:
    """(sum_i ||b_i||^p mu(I_i)^p)^(1/p) over the current piece list."""
    if spec.algebra is not f.algebra:
        raise AlgebraMismatch("norm spec is not over the value algebra")
    if len(f) == 0:
        return 0.0
    terms = spec.rows(f.coeffs) * f.measures()
    if spec.p == 1:
        return math.fsum(terms)
    return math.fsum(terms**spec.p) ** (1.0 / spec.p)


def cut(f: StepFunction, axis: int, t: float) -> StepFunction:
    """Split every piece that meets both sides of the hyperplane x_axis = t.

    The lower part gets [lo, t) and the upper part [t, hi...], so evaluation
    is unchanged.
    """
    lo, hi, lc, hc, c = (np.array(a) for a in (f.lo, f.hi, f.lc, f.hc, f.coeffs))
    a = axis
    straddle = (lo[:, a] < t) & ((hi[:, a] > t) | ((hi[:, a] == t) & hc[:, a]))
    if not np.any(straddle):
        return f
    keep = ~straddle
    s = np.flatnonzero(straddle)
    lo1, hi1, lc1, hc1 = lo[s].copy(), hi[s].copy(), lc[s].copy(), hc[s].copy()
    hi1[:, a], hc1[:, a] = t, False
    lo2, hi2, lc2, hc2 = lo[s].copy(), hi[s].copy(), lc[s].copy(), hc[s].copy()
    lo2[:, a], lc2[:, a] = t, True
    # interleave to keep piece order stable: original order, each straddler replaced by its two halves
    order_lo, order_hi, order_lc, order_hc, order_c = [], [], [], [], []
    pos = {int(i): k for k, i in enumerate(s)}
    for i in range(len(f)):
        if keep[i]:
            order_lo.append(lo[i]); order_hi.append(hi[i]); order_lc.append(lc[i]); order_hc.append(hc[i]); order_c.append(c[i])
        else:
            k = pos[i]
            order_lo += [lo1[k], lo2[k]]; order_hi += [hi1[k], hi2[k]]
            order_lc += [lc1[k], lc2[k]]; order_hc += [hc1[k], hc2[k]]
            order_c += [c[i], c[i]]
    return StepFunction(f.domain, f.algebra, order_lo, order_hi, order_lc, order_hc, order_c)


def split_piece(f: StepFunction, index: int, axis: int, frac: float = 0.5) -> StepFunction:
    """Split one piece at a relative position along one axis."""
    lo, hi = f.lo[index, axis], f.hi[index, axis]
    if not lo < hi:
        return f
    t = lo + frac * (hi - lo)
    if not lo < t < hi:
        return f
    L, H, LC, HC, C = (list(a) for a in (f.lo, f.hi, f.lc, f.hc, f.coeffs))
    lo2, hi1 = f.lo[index].copy(), f.hi[index].copy()
    lc2, hc1 = f.lc[index].copy(), f.hc[index].copy()
    hi1[axis], hc1[axis] = t, False
    lo2[axis], lc2[axis] = t, True
    L[index:index + 1] = [f.lo[index], lo2]
    H[index:index + 1] = [hi1, f.hi[index]]
    LC[index:index + 1] = [f.lc[index], lc2]
    HC[index:index + 1] = [hc1, f.hc[index]]
    C[index:index + 1] = [f.coeffs[index], f.coeffs[index]]
    return StepFunction(f.domain, f.algebra, L, H, LC, HC, C)


# ---------------------------------------------------------------- juxtaposition


def gamma_xi(fs: Sequence[StepFunction]) -> StepFunction:
    """Shrink 2^d functions into the 2^d sub-boxes cut by xi and glue them.

    ``fs`` is ordered by corner signature, lexicographic with 0 for the lower side.
    """
    if not fs:
        raise ArityMismatch("need 2^d step functions")
    dom = fs[0].domain
    sigs = dom.signatures()
    if len(fs) != len(sigs):
        raise ArityMismatch(f"need exactly {len(sigs)} step functions, got {len(fs)}")
    for g in fs[1:]:
        fs[0]._compatible(g)
    los, his, lcs, hcs, cs = [], [], [], [], []
    for sig, g in zip(sigs, fs):
        if len(g) == 0:
            continue
        s = np.asarray(sig, dtype=bool)
        lo = dom.kappa(sig, g.lo)
        hi = dom.kappa(sig, g.hi)
        # the lower-side image of the global upper face stops at xi and is open there
        hc = np.where(~s & (g.hi == dom.hi), False, g.hc)
        los.append(lo); his.append(hi); lcs.append(g.lc); hcs.append(hc); cs.append(g.coeffs)
    if not los:
        return StepFunction.zero(dom, fs[0].algebra)
    return StepFunction(dom, fs[0].algebra, *(np.concatenate(a) for a in (los, his, lcs, hcs, cs)))


def gamma_xi_inverse(f: StepFunction, split: bool = False) -> list[StepFunction]:
    """Undo gamma_xi for a function whose pieces each sit inside one sub-box.

    With ``split=True`` pieces straddling xi are first cut there; otherwise
    such a piece raises NotAligned.
    """
    dom = f.domain
    if split:
        for k in range(dom.dim):
            f = cut(f, k, float(dom.xi[k]))
    # a piece is on the upper side of axis k iff it lies in [xi, d]
    upper = f.lo >= dom.xi
    lower = (f.hi < dom.xi) | ((f.hi == dom.xi) & ~f.hc)
    if np.any(~(upper | lower)):
        i = int(np.flatnonzero(np.any(~(upper | lower), axis=1))[0])
        raise NotAligned(f"piece {i} straddles a sub-box boundary")
    out = []
    for sig in dom.signatures():
        s = np.asarray(sig, dtype=bool)
        mask = np.all(np.where(s, upper, lower), axis=1)
        lo = dom.kappa_inv(sig, f.lo[mask])
        hi = dom.kappa_inv(sig, f.hi[mask])
        hc = np.where(~s & (f.hi[mask] == dom.xi), True, f.hc[mask])
        out.append(StepFunction(dom, f.algebra, lo, hi, f.lc[mask], hc, f.coeffs[mask]))
    return out


# ---------------------------------------------------------------- dyadic sampling


def level_grid(domain: Domain, u: int):
    """Breakpoints plus the number of cells at level u."""
    bps = domain.breakpoints(u)
    return bps, (2**u) ** domain.dim


def check_budget(domain: Domain, u: int, budget: int | None = None) -> int:
    budget = cell_budget() if budget is None else budget
    ncells = 2 ** (u * domain.dim)
    if ncells > budget:
        raise BudgetExceeded(f"level {u} in dimension {domain.dim} needs {ncells} cells, budget is {budget}")
    return ncells


def cell_points(domain: Domain, u: int, flat_index: np.ndarray, rule: str = "midpoint"):
    """Sample points and measures for the given flat cell indices (C order over axes)."""
    bps = domain.breakpoints(u)
    m = 2**u
    idx = np.unravel_index(flat_index, (m,) * domain.dim)
    lo = np.stack([bps[k][idx[k]] for k in range(domain.dim)], axis=1)
    hi = np.stack([bps[k][idx[k] + 1] for k in range(domain.dim)], axis=1)
    if rule == "midpoint":
        pts = (lo + hi) / 2
    elif rule == "corner":
        pts = lo
    else:
        raise ValueError(f"unknown sampling rule {rule!r}")
    return pts, lo, hi, np.stack(idx, axis=1)


def sample_to_Eu(h: Callable, domain: Domain, algebra: StructureConstantAlgebra, u: int, rule: str = "midpoint", budget: int | None = None) -> StepFunction:
    """The level-u cell function whose value on each cell is h at its midpoint or lower corner.

    ``h`` maps an (m, d) array of points to an (m, dim B) coefficient array.
    """
    if u < 0:
        raise ValueError("u must be >= 0")
    ncells = check_budget(domain, u, budget)
    pts, lo, hi, idx = cell_points(domain, u, np.arange(ncells), rule)
    vals = np.asarray(h(pts), dtype=float).reshape(ncells, algebra.dim)
    lc = np.ones_like(lo, dtype=bool)
    hc = idx == 2**u - 1
    return StepFunction(domain, algebra, lo, hi, lc, hc, vals)


def eu_weights(domain: Domain, f: StepFunction) -> np.ndarray:
    return f.measures() / domain.measure


def eu_norm(f: StepFunction, spec: PNormSpec) -> float:
    """Direct-sum norm on the dyadic hierarchy: constants keep their algebra norm and each
    juxtaposition combines components with weights mu(sub-box)/mu(domain).

    Unrolled, this is (sum_i (mu_i/mu)^p ||b_i||^p)^(1/p) on the cell list.
    """
    if len(f) == 0:
        return 0.0
    terms = spec.rows(f.coeffs) * eu_weights(f.domain, f)
    if spec.p == 1:
        return math.fsum(terms)
    return math.fsum(terms**spec.p) ** (1.0 / spec.p)


def random_step_function(rng: np.random.Generator, domain: Domain, algebra: StructureConstantAlgebra, max_cuts: int = 3, density: float = 0.7, scale: float = 1.0) -> StepFunction:
    """Random sparse grid function with half-open cells and random coefficients."""
    bps = []
    for k in range(domain.dim):
        n = int(rng.integers(0, max_cuts + 1))
        inner = np.sort(rng.uniform(domain.lo[k], domain.hi[k], size=n))
        inner = np.unique(inner[(inner > domain.lo[k]) & (inner < domain.hi[k])])
        bps.append(np.concatenate([[domain.lo[k]], inner, [domain.hi[k]]]))
    shape = tuple(len(b) - 1 for b in bps)
    cells = np.array(list(np.ndindex(*shape)), dtype=int).reshape(-1, domain.dim)
    keep = rng.random(len(cells)) < density
    if not np.any(keep):
        keep[int(rng.integers(len(cells)))] = True
    cells = cells[keep]
    lo = np.stack([bps[k][cells[:, k]] for k in range(domain.dim)], axis=1)
    hi = np.stack([bps[k][cells[:, k] + 1] for k in range(domain.dim)], axis=1)
    hc = np.stack([cells[:, k] == shape[k] - 1 for k in range(domain.dim)], axis=1)
    lc = np.ones_like(hc)
    coeffs = scale * rng.uniform(-1, 1, size=(len(cells), algebra.dim))
    return StepFunction(domain, algebra, lo, hi, lc, hc, coeffs)


def random_points(rng: np.random.Generator, domain: Domain, m: int, f: StepFunction | None = None) -> np.ndarray:
    """Uniform points, mixed with box corners of f so boundaries get exercised."""
    pts = rng.uniform(domain.lo, domain.hi, size=(m, domain.dim))
    if f is not None and len(f):
        k = m // 4
        rows = rng.integers(len(f), size=k)
        cols = rng.random((k, domain.dim)) < 0.5
        pts[:k] = np.where(cols, f.lo[rows], f.hi[rows])
    return pts
