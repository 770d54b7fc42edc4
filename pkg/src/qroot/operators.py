"""Monomial operators on V = (C^l)^N, N = n(n+1)/2.

A basis vector u_m of V is labelled by m in (Z/l)^N, one residue per pair
(j, k) with 1 <= j <= k <= n.  The group ring of the Heisenberg-type group
generated by x_jk, z_jk acts through

    X_jk u_m = u_{m + e_jk},     Z_jk u_m = eps^{m_jk} u_m,

so that Z X = eps X Z on each factor.  Every operator is stored as a merged
sum of normal-form monomials ``c * X^a Z^b`` acting by
``u_m -> c eps^{b.m} u_{m+a}``.  With exponents mod l these monomials form a
basis of End(V), so the merged form of an operator is canonical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .cyclotomic import Cyclotomic, eps_power

__all__ = [
    "SpaceShape",
    "SizeCapExceeded",
    "ShapeMismatch",
    "SparseVector",
    "MonomialOp",
    "LinearOp",
    "SparseMatrix",
    "monomial_product",
    "apply",
    "star",
    "to_matrix",
    "op_power",
    "DEFAULT_SIZE_CAP",
]

DEFAULT_SIZE_CAP = 10_000

BasisIndex = tuple  # tuple[int, ...] of residues mod l


class SizeCapExceeded(RuntimeError):
    """The requested dense enumeration of V exceeds the configured cap."""


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SpaceShape:
    """Rank n, level l and the lexicographic list of factor pairs (j, k)."""

    n: int
    l: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"rank must be positive, got {self.n}")
        if self.l <= 1 or self.l % 2 == 0:
            raise ValueError(f"l must be odd > 1, got {self.l}")

    @cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((j, k) for j in range(1, self.n + 1) for k in range(j, self.n + 1))

    @cached_property
    def _pos(self) -> dict[tuple[int, int], int]:
        return {p: i for i, p in enumerate(self.pairs)}

    @property
    def N(self) -> int:
        return self.n * (self.n + 1) // 2

    @property
    def dim(self) -> int:
        return self.l ** self.N

    def pos(self, j: int, k: int) -> int | None:
        """Position of factor (j, k), or None when the pair is out of range."""
        return self._pos.get((j, k))

    def zero_index(self) -> BasisIndex:
        return (0,) * self.N

    def unit(self, j: int, k: int, times: int = 1) -> BasisIndex:
        """times * e_jk; out-of-range pairs give the zero index."""
        out = [0] * self.N
        p = self.pos(j, k)
        if p is not None:
            out[p] = times % self.l
        return tuple(out)

    def index(self, entries: Mapping[tuple[int, int], int] | Sequence[int]) -> BasisIndex:
        if isinstance(entries, Mapping):
            out = [0] * self.N
            for (j, k), v in entries.items():
                p = self.pos(j, k)
                if p is None:
                    raise ValueError(f"pair {(j, k)} out of range for n={self.n}")
                out[p] = v % self.l
            return tuple(out)
        if len(entries) != self.N:
            raise ValueError(f"index needs {self.N} entries, got {len(entries)}")
        return tuple(v % self.l for v in entries)

    def add(self, m: BasisIndex, a: BasisIndex) -> BasisIndex:
        l = self.l
        return tuple((x + y) % l for x, y in zip(m, a))

    def basis(self, cap: int = DEFAULT_SIZE_CAP) -> Iterator[BasisIndex]:
        """All basis indices in lexicographic order."""
        if self.dim > cap:
            raise SizeCapExceeded(f"dim V = {self.dim} exceeds cap {cap}")
        return itertools.product(range(self.l), repeat=self.N)

    def mirror_position(self, p: int) -> int:
        j, k = self.pairs[p]
        return self._pos[(k + 1 - j, k)]

    def as_dict(self) -> dict:
        return {"n": self.n, "l": self.l, "N": self.N, "pairs": [list(p) for p in self.pairs]}


def _check_same(a: SpaceShape, b: SpaceShape) -> None:
    if a != b:
        raise ShapeMismatch(f"shape mismatch: {a} vs {b}")


class SparseVector:
    """Finite linear combination of basis vectors with nonzero coefficients."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape: SpaceShape, terms: Mapping[BasisIndex, Cyclotomic] | None = None):
        self.shape = shape
        self.terms: dict[BasisIndex, Cyclotomic] = (
            {m: c for m, c in terms.items() if c} if terms else {}
        )

    @classmethod
    def basis_vector(cls, shape: SpaceShape, m: BasisIndex, coeff: Cyclotomic | None = None):
        c = coeff if coeff is not None else Cyclotomic.one(shape.l)
        return cls(shape, {tuple(m): c})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        body = ", ".join(f"{m}: {c}" for m, c in sorted(self.terms.items())[:6])
        more = "" if len(self.terms) <= 6 else ", ..."
        return f"SparseVector({{{body}{more}}})"

    def __add__(self, other: "SparseVector") -> "SparseVector":
        _check_same(self.shape, other.shape)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return SparseVector(self.shape, out)

    def __neg__(self) -> "SparseVector":
        return SparseVector(self.shape, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + (-other)

    def scale(self, c) -> "SparseVector":
        return SparseVector(self.shape, {m: v * c for m, v in self.terms.items()})

    def items_sorted(self) -> list[tuple[BasisIndex, Cyclotomic]]:
        return sorted(self.terms.items())

    def to_json(self) -> list:
        return [{"index": list(m), "value": c.to_text()} for m, c in self.items_sorted()]


@dataclass(frozen=True)
class MonomialOp:
    """coeff * X^shift Z^phase, acting by u_m -> coeff eps^{phase.m} u_{m+shift}."""

    coeff: Cyclotomic
    shift: BasisIndex
    phase: BasisIndex

    @classmethod
    def identity(cls, shape: SpaceShape) -> "MonomialOp":
        z = shape.zero_index()
        return cls(Cyclotomic.one(shape.l), z, z)

    @classmethod
    def X(cls, shape: SpaceShape, j: int, k: int, power: int = 1) -> "MonomialOp":
        return cls(Cyclotomic.one(shape.l), shape.unit(j, k, power), shape.zero_index())

    @classmethod
    def Z(cls, shape: SpaceShape, j: int, k: int, power: int = 1) -> "MonomialOp":
        return cls(Cyclotomic.one(shape.l), shape.zero_index(), shape.unit(j, k, power))

    def __mul__(self, other):
        if isinstance(other, MonomialOp):
            return monomial_product(self, other)
        return MonomialOp(self.coeff * other, self.shift, self.phase)

    def inverse(self) -> "MonomialOp":
        l = self.coeff.l
        # (c X^a Z^b)^-1 = c^-1 Z^-b X^-a = c^-1 eps^{b.a} X^-a Z^-b
        k = sum(x * y for x, y in zip(self.phase, self.shift))
        return MonomialOp(
            self.coeff.inverse().mul_eps(k),
            tuple(-x % l for x in self.shift),
            tuple(-x % l for x in self.phase),
        )

    def as_linear(self, shape: SpaceShape) -> "LinearOp":
        return LinearOp(shape, {(self.shift, self.phase): self.coeff})

    def to_json(self) -> dict:
        return {"coeff": self.coeff.to_text(), "shift": list(self.shift), "phase": list(self.phase)}


def monomial_product(p: MonomialOp, q: MonomialOp) -> MonomialOp:
    """Normal form of p q, using Z^b X^a = eps^{b.a} X^a Z^b."""
    if len(p.shift) != len(q.shift) or p.coeff.l != q.coeff.l:
        raise ShapeMismatch("monomials live on different spaces")
    l = p.coeff.l
    k = sum(x * y for x, y in zip(p.phase, q.shift))
    return MonomialOp(
        (p.coeff * q.coeff).mul_eps(k),
        tuple((x + y) % l for x, y in zip(p.shift, q.shift)),
        tuple((x + y) % l for x, y in zip(p.phase, q.phase)),
    )


class LinearOp:
    """Sum of normal-form monomials, merged on (shift, phase)."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape: SpaceShape, terms: Mapping[tuple, Cyclotomic] | None = None):
        self.shape = shape
        self.terms: dict[tuple, Cyclotomic] = (
            {key: c for key, c in terms.items() if c} if terms else {}
        )

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, shape: SpaceShape) -> "LinearOp":
        return MonomialOp.identity(shape).as_linear(shape)

    @classmethod
    def zero(cls, shape: SpaceShape) -> "LinearOp":
        return cls(shape)

    @classmethod
    def from_monomials(cls, shape: SpaceShape, monos: Iterable[MonomialOp]) -> "LinearOp":
        out: dict[tuple, Cyclotomic] = {}
        for mo in monos:
            key = (mo.shift, mo.phase)
            v = out.get(key)
            out[key] = mo.coeff if v is None else v + mo.coeff
        return cls(shape, out)

    def monomials(self) -> list[MonomialOp]:
        return [MonomialOp(c, a, b) for (a, b), c in sorted(self.terms.items())]

    # -- algebra ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearOp):
            return NotImplemented
        return self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((self.shape, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"LinearOp(n={self.shape.n}, l={self.shape.l}, {len(self.terms)} terms)"

    def __add__(self, other: "LinearOp") -> "LinearOp":
        _check_same(self.shape, other.shape)
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = out.get(key)
            out[key] = c if v is None else v + c
        return LinearOp(self.shape, out)

    def __neg__(self) -> "LinearOp":
        return LinearOp(self.shape, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other: "LinearOp") -> "LinearOp":
        return self + (-other)

    def scale(self, c) -> "LinearOp":
        return LinearOp(self.shape, {key: v * c for key, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, LinearOp):
            return self.compose(other)
        if isinstance(other, MonomialOp):
            return self.compose(other.as_linear(self.shape))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def compose(self, other: "LinearOp") -> "LinearOp":
        """self after other, i.e. the operator product self * other."""
        _check_same(self.shape, other.shape)
        l = self.shape.l
        out: dict[tuple, Cyclotomic] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = sum(x * y for x, y in zip(b1, a2))
                key = (
                    tuple((x + y) % l for x, y in zip(a1, a2)),
                    tuple((x + y) % l for x, y in zip(b1, b2)),
                )
                c = (c1 * c2).mul_eps(k)
                v = out.get(key)
                out[key] = c if v is None else v + c
        return LinearOp(self.shape, out)

    def apply(self, v: SparseVector) -> SparseVector:
        return apply(self, v)

    def to_json(self) -> list:
        return [mo.to_json() for mo in self.monomials()]


def apply(L: LinearOp, v: SparseVector) -> SparseVector:
    """Exact action of L on a sparse vector."""
    _check_same(L.shape, v.shape)
    l = L.shape.l
    out: dict[BasisIndex, Cyclotomic] = {}
    for m, cm in v.terms.items():
        for (a, b), c in L.terms.items():
            k = sum(x * y for x, y in zip(b, m))
            tgt = tuple((x + y) % l for x, y in zip(m, a))
            val = (c * cm).mul_eps(k)
            prev = out.get(tgt)
            out[tgt] = val if prev is None else prev + val
    return SparseVector(L.shape, out)


def star(L: LinearOp) -> LinearOp:
    """The involution x_jk -> x_{k+1-j,k}^-1, z_jk -> z_{k+1-j,k}^-1, extended linearly.

    It is multiplicative in the same order, star(PQ) = star(P) star(Q); the
    reversed-order rule is incompatible with z x = eps x z.
    """
    sh = L.shape
    l = sh.l
    mirror = [sh.mirror_position(p) for p in range(sh.N)]
    out: dict[tuple, Cyclotomic] = {}
    for (a, b), c in L.terms.items():
        # c X^a Z^b -> c X'^-a Z'^-b is already in normal form
        na = [0] * sh.N
        nb = [0] * sh.N
        for p in range(sh.N):
            na[mirror[p]] = -a[p] % l
            nb[mirror[p]] = -b[p] % l
        out[(tuple(na), tuple(nb))] = c
    return LinearOp(sh, out)


def op_power(L: LinearOp, m: int) -> LinearOp:
    """m-fold product L^m; L^0 is the identity."""
    if m < 0:
        raise ValueError("power must be non-negative")
    result = LinearOp.identity(L.shape)
    for _ in range(m):
        result = L.compose(result)
    return result


class SparseMatrix:
    """Exact sparse matrix on V stored by columns: col index -> {row index: value}."""

    __slots__ = ("shape", "cols")

    def __init__(self, shape: SpaceShape, cols: Mapping[BasisIndex, Mapping[BasisIndex, Cyclotomic]]):
        self.shape = shape
        self.cols: dict[BasisIndex, dict[BasisIndex, Cyclotomic]] = {
            j: {i: v for i, v in col.items() if v} for j, col in cols.items()
        }
        self.cols = {j: col for j, col in self.cols.items() if col}

    @classmethod
    def identity(cls, shape: SpaceShape, cap: int = DEFAULT_SIZE_CAP) -> "SparseMatrix":
        one = Cyclotomic.one(shape.l)
        return cls(shape, {m: {m: one} for m in shape.basis(cap)})

    @classmethod
    def zero(cls, shape: SpaceShape) -> "SparseMatrix":
        return cls(shape, {})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def is_zero(self) -> bool:
        return not self.cols

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def __repr__(self) -> str:
        return f"SparseMatrix({self.shape.dim}x{self.shape.dim}, nnz={self.nnz()})"

    def column(self, m: BasisIndex) -> SparseVector:
        return SparseVector(self.shape, self.cols.get(tuple(m), {}))

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        _check_same(self.shape, other.shape)
        out = {j: dict(col) for j, col in self.cols.items()}
        for j, col in other.cols.items():
            tgt = out.setdefault(j, {})
            for i, v in col.items():
                w = tgt.get(i)
                tgt[i] = v if w is None else w + v
        return SparseMatrix(self.shape, out)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix(self.shape, {j: {i: -v for i, v in c.items()} for j, c in self.cols.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        return SparseMatrix(self.shape, {j: {i: v * c for i, v in col.items()} for j, col in self.cols.items()})

    def __mul__(self, other):
        if isinstance(other, SparseMatrix):
            return self.matmul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        _check_same(self.shape, other.shape)
        out = {}
        for j, col in other.cols.items():
            acc: dict[BasisIndex, Cyclotomic] = {}
            for k, v in col.items():
                left = self.cols.get(k)
                if not left:
                    continue
                for i, w in left.items():
                    x = w * v
                    y = acc.get(i)
                    acc[i] = x if y is None else y + x
            out[j] = acc
        return SparseMatrix(self.shape, out)

    def apply(self, v: SparseVector) -> SparseVector:
        _check_same(self.shape, v.shape)
        acc: dict[BasisIndex, Cyclotomic] = {}
        for k, c in v.terms.items():
            for i, w in self.cols.get(k, {}).items():
                x = w * c
                y = acc.get(i)
                acc[i] = x if y is None else y + x
        return SparseVector(self.shape, acc)

    def power(self, m: int, cap: int = DEFAULT_SIZE_CAP) -> "SparseMatrix":
        result = SparseMatrix.identity(self.shape, cap)
        for _ in range(m):
            result = self.matmul(result)
        return result

    def entries(self) -> list[tuple[BasisIndex, BasisIndex, Cyclotomic]]:
        """(row, col, value) triples sorted lexicographically by (row, col)."""
        return sorted((i, j, v) for j, col in self.cols.items() for i, v in col.items())

    def to_json(self) -> dict:
        return {
            "shape": [self.shape.dim, self.shape.dim],
            "entries": [
                {"row": list(i), "col": list(j), "value": v.to_text()} for i, j, v in self.entries()
            ],
        }


def to_matrix(L: LinearOp, cap: int = DEFAULT_SIZE_CAP) -> SparseMatrix:
    """Column m of the result holds L u_m."""
    sh = L.shape
    l = sh.l
    terms = list(L.terms.items())
    cols = {}
    for m in sh.basis(cap):
        acc: dict[BasisIndex, Cyclotomic] = {}
        for (a, b), c in terms:
            k = sum(x * y for x, y in zip(b, m))
            tgt = tuple((x + y) % l for x, y in zip(m, a))
            val = c.mul_eps(k)
            prev = acc.get(tgt)
            acc[tgt] = val if prev is None else prev + val
        cols[m] = acc
    return SparseMatrix(sh, cols)
