"""Exact linear algebra on V: kernels, submodule closure, weights, certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .cyclotomic import Cyclotomic, discrete_log
from .operators import DEFAULT_SIZE_CAP, LinearOp, SizeCapExceeded, SpaceShape, SparseVector
from .representation import (
    ParamSet,
    SpecializationError,
    gen_image,
    params_digest,
    shift_params,
    validate_params,
)
from .roots import ConventionFlag, RootVectorFactory, calibrate_conventions, pbw_f_monomials, positive_roots

__all__ = [
    "Subspace",
    "nullspace",
    "kernel_intersection",
    "primitive_subspace",
    "module_generators",
    "submodule_closure",
    "WeightReport",
    "weight_decompose",
    "DimensionReport",
    "dimension_report",
    "pbw_span",
    "IrreducibilityCertificate",
    "irreducibility_certificate",
    "PRIMITIVE_VECTOR_PREMISE",
]

PRIMITIVE_VECTOR_PREMISE = (
    "every finite-dimensional module over the finite quantum algebra contains a primitive vector"
)


class Subspace:
    """Row-reduced echelon basis over an ordered coordinate set.

    Pivots are the smallest coordinate of each basis vector, pivot entries are
    1 and every pivot coordinate is cleared from all other basis vectors.
    Coordinates may be any sortable hashable keys (BasisIndex tuples on V).
    """

    def __init__(self, shape: SpaceShape | None = None):
        self.shape = shape
        self.rows: dict[Hashable, dict[Hashable, Cyclotomic]] = {}
        # coordinate -> pivots of rows holding a non-pivot entry there
        self._occ: dict[Hashable, set] = {}

    @classmethod
    def span(cls, shape: SpaceShape | None, vectors: Iterable) -> "Subspace":
        S = cls(shape)
        for v in vectors:
            S.insert(v)
        return S

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def pivots(self) -> list:
        return sorted(self.rows)

    def _terms(self, v) -> dict:
        return dict(v.terms) if isinstance(v, SparseVector) else dict(v)

    def reduce(self, v) -> dict:
        """Remainder of v modulo the subspace (a dict with no pivot coordinates)."""
        w = {k: c for k, c in self._terms(v).items() if c}
        for p in [k for k in w if k in self.rows]:
            c = w.get(p)
            if not c:
                continue
            for k, rc in self.rows[p].items():
                val = w.get(k)
                val = -(c * rc) if val is None else val - c * rc
                if val:
                    w[k] = val
                else:
                    w.pop(k, None)
        return w

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def insert(self, v) -> dict | None:
        """Add v; return its nonzero remainder if the dimension grew, else None."""
        w = self.reduce(v)
        if not w:
            return None
        p = min(w)
        inv = w[p].inverse()
        row = {k: c * inv for k, c in w.items()}
        # clear p from existing rows
        for q in sorted(self._occ.pop(p, ())):
            other = self.rows[q]
            c = other.pop(p)
            for k, rc in row.items():
                if k == p:
                    continue
                val = other.get(k)
                val = -(c * rc) if val is None else val - c * rc
                if val:
                    if k not in other:
                        self._occ.setdefault(k, set()).add(q)
                    other[k] = val
                else:
                    other.pop(k, None)
                    s = self._occ.get(k)
                    if s is not None:
                        s.discard(q)
        self.rows[p] = row
        for k in row:
            if k != p:
                self._occ.setdefault(k, set()).add(p)
        return w

    def basis(self) -> list[SparseVector]:
        if self.shape is None:
            raise ValueError("coordinate-only subspace has no SparseVector basis")
        return [SparseVector(self.shape, self.rows[p]) for p in self.pivots()]

    def basis_dicts(self) -> list[dict]:
        return [self.rows[p] for p in self.pivots()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.rows == other.rows

    def is_span_of(self, m) -> bool:
        """True when the subspace is exactly the line through the basis vector u_m."""
        m = tuple(m)
        row = self.rows.get(m)
        return self.dim == 1 and row is not None and len(row) == 1

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "basis": [
                [{"index": list(k), "value": c.to_text()} for k, c in sorted(row.items())]
                for row in self.basis_dicts()
            ],
        }


def nullspace(columns: Mapping[Hashable, Mapping[Hashable, Cyclotomic]], variables: Sequence, l: int) -> list[dict]:
    """Kernel of the linear map sending variable x to the vector columns[x].

    ``columns`` maps each variable to its image (row key -> value); variables
    without an entry map to zero.  Returns kernel vectors as dicts over
    variables, one per free variable, before canonical reduction.
    """
    # equations: row key -> {variable: coefficient}
    eqs: dict[Hashable, dict] = {}
    for x in variables:
        for r, c in columns.get(x, {}).items():
            if c:
                eqs.setdefault(r, {})[x] = c
    R = Subspace()
    for r in sorted(eqs):
        R.insert(eqs[r])
    free = [x for x in variables if x not in R.rows]
    out = []
    for x in free:
        v = {x: Cyclotomic.one(l)}
        for p in R._occ.get(x, ()):
            v[p] = -R.rows[p][x]
        out.append(v)
    return out


def kernel_intersection(ops: Sequence[LinearOp], shape: SpaceShape | None = None, cap: int = DEFAULT_SIZE_CAP) -> Subspace:
    """Common null space of the operators, row-reduced."""
    if shape is None:
        if not ops:
            raise ValueError("shape is required for an empty operator list")
        shape = ops[0].shape
    basis = list(shape.basis(cap))
    one = Cyclotomic.one(shape.l)
    if not ops:
        return Subspace.span(shape, ({m: one} for m in basis))
    columns = {}
    for m in basis:
        u = SparseVector.basis_vector(shape, m)
        col = {}
        for t, op in enumerate(ops):
            for r, c in op.apply(u).terms.items():
                col[(t, r)] = c
        columns[m] = col
    return Subspace.span(shape, nullspace(columns, basis, shape.l))


def primitive_subspace(P: ParamSet, cap: int = DEFAULT_SIZE_CAP) -> Subspace:
    """Vectors killed by every e_i."""
    return kernel_intersection([gen_image("e", i, P) for i in range(1, P.n + 1)], P.shape, cap)


def module_generators(P: ParamSet) -> list[LinearOp]:
    """e_1..e_n, f_1..f_n, t_1..t_n, t_1^-1..t_n^-1 in this order."""
    out = []
    for g in ("e", "f", "t", "t^-1"):
        out.extend(gen_image(g, i, P) for i in range(1, P.n + 1))
    return out


def submodule_closure(
    seeds: Sequence[SparseVector],
    generators: Sequence[LinearOp],
    cap: int = DEFAULT_SIZE_CAP,
    verify: bool = True,
) -> Subspace:
    """Smallest generator-invariant subspace containing the seeds."""
    if not seeds:
        raise ValueError("at least one seed is required")
    shape = seeds[0].shape
    if shape.dim > cap:
        raise SizeCapExceeded(f"dim V = {shape.dim} exceeds cap {cap}")
    S = Subspace(shape)
    layer = []
    for v in seeds:
        w = S.insert(v)
        if w is not None:
            layer.append(SparseVector(shape, w))
    while layer:
        nxt = []
        for v in layer:
            for g in generators:
                w = S.insert(g.apply(v))
                if w is not None:
                    nxt.append(SparseVector(shape, w))
        layer = nxt
    if verify:
        for b in S.basis():
            for g in generators:
                if not S.contains(g.apply(b)):
                    raise AssertionError("closure is not invariant under a generator")
    return S


@dataclass
class WeightReport:
    multiplicities: dict[tuple, int]
    total: int

    def to_json(self) -> dict:
        return {
            "multiplicities": {",".join(map(str, w)): k for w, k in sorted(self.multiplicities.items())},
            "total": self.total,
        }


def _weight_functions(P: ParamSet):
    """For each t_i, a function m -> exponent of its eigenvalue on u_m."""
    funcs = []
    for i in range(1, P.n + 1):
        t = gen_image("t", i, P)
        if len(t) != 1:
            raise ValueError("t image is not a single diagonal monomial")
        (shift, phase), c = next(iter(t.terms.items()))
        if any(shift):
            raise ValueError("t image is not diagonal")
        base = discrete_log(c)
        if base is None:
            raise ValueError(f"t_{i} scalar {c} is not a power of eps")
        funcs.append((base, phase))
    l = P.l
    return lambda m: tuple((b + sum(x * y for x, y in zip(ph, m))) % l for b, ph in funcs)


def weight_decompose(S: Subspace, P: ParamSet) -> WeightReport:
    """Multiplicities of the simultaneous t-eigenspaces of a t-invariant subspace."""
    wt = _weight_functions(P)
    ts = [gen_image("t", i, P) for i in range(1, P.n + 1)]
    basis = S.basis()
    for b in basis:
        for t in ts:
            if not S.contains(t.apply(b)):
                raise ValueError("subspace is not invariant under the t_i")
    parts: dict[tuple, Subspace] = {}
    for b in basis:
        split: dict[tuple, dict] = {}
        for m, c in b.terms.items():
            split.setdefault(wt(m), {})[m] = c
        for w, piece in split.items():
            parts.setdefault(w, Subspace(P.shape)).insert(piece)
    mult = {w: sub.dim for w, sub in parts.items()}
    total = sum(mult.values())
    if total != S.dim:
        raise AssertionError(f"weight multiplicities sum to {total}, dim is {S.dim}")
    return WeightReport(dict(sorted(mult.items())), total)


def pbw_span(P: ParamSet, flag: ConventionFlag, top: Sequence[int] | None = None, cap: int = DEFAULT_SIZE_CAP) -> Subspace:
    """Span of fbar_{beta_N}^{r_N} ... fbar_{beta_1}^{r_1} u_top over all exponent tuples."""
    sh = P.shape
    F = RootVectorFactory(P, flag)
    ops = [F("f", b, "bar") for b in positive_roots(P.n)]
    list(pbw_f_monomials(P.n, P.l, cap))  # cap check only
    start = SparseVector.basis_vector(sh, tuple(top) if top is not None else sh.zero_index())
    S = Subspace(sh)
    # depth-first over (r_1, ..., r_N), sharing prefixes
    def walk(k: int, v: SparseVector):
        if k == len(ops):
            S.insert(v)
            return
        for _ in range(P.l):
            walk(k + 1, v)
            if not v:
                break
            v = ops[k].apply(v)

    walk(0, start)
    return S


@dataclass
class DimensionReport:
    dim_closure: int
    dim_pbw: int | None
    weights: WeightReport
    flag: ConventionFlag
    pbw_note: str = ""

    @property
    def agree(self) -> bool:
        return self.dim_pbw is None or self.dim_pbw == self.dim_closure

    def to_json(self) -> dict:
        out = {
            "dim_L": self.dim_closure,
            "strategy_closure": self.dim_closure,
            "strategy_pbw": self.dim_pbw,
            "strategies_agree": self.agree,
            "flag": self.flag.to_json(),
            "weights": self.weights.to_json(),
        }
        if self.pbw_note:
            out["strategy_pbw_note"] = self.pbw_note
        return out


class StrategyMismatch(AssertionError):
    pass


def dimension_report(
    P: ParamSet,
    flag: ConventionFlag | None = None,
    *,
    top: Sequence[int] | None = None,
    pbw_cap: int = 1000,
    cap: int = DEFAULT_SIZE_CAP,
) -> DimensionReport:
    """dim L by generator closure and by PBW monomials on the top vector.

    The PBW strategy runs only while l^N <= pbw_cap; disagreement raises
    StrategyMismatch.
    """
    if flag is None:
        flag = calibrate_conventions(P).selected
    sh = P.shape
    u = SparseVector.basis_vector(sh, tuple(top) if top is not None else sh.zero_index())
    L = submodule_closure([u], module_generators(P), cap)
    dim_b, note = None, ""
    if P.l ** sh.N <= pbw_cap:
        B = pbw_span(P, flag, top, cap)
        dim_b = B.dim
        if B != L:
            raise StrategyMismatch(f"closure gives dim {L.dim}, PBW span gives dim {B.dim}")
    else:
        note = f"skipped: l^N = {P.l ** sh.N} exceeds PBW cap {pbw_cap}"
    return DimensionReport(L.dim, dim_b, weight_decompose(L, P), flag, note)


@dataclass
class IrreducibilityCertificate:
    digest: str
    lam: tuple | None
    flag: ConventionFlag | None
    top: tuple
    primitive_dim_V: int | None = None
    primitive_dim_L: int | None = None
    primitive_is_top_line: bool = False
    closure_equals_L: bool = False
    dim_L: int | None = None
    weights: WeightReport | None = None
    verdict: str = "specialization invalid"
    reason: str = ""

    def to_json(self) -> dict:
        out = {
            "params-digest": self.digest,
            "lambda": list(self.lam) if self.lam is not None else None,
            "flag": self.flag.to_json() if self.flag is not None else None,
            "top_vector": list(self.top),
            "primitive_dim_V": self.primitive_dim_V,
            "primitive_dim_L": self.primitive_dim_L,
            "primitive_is_top_line": self.primitive_is_top_line,
            "closure_equals_L": self.closure_equals_L,
            "dim_L": self.dim_L,
            "weights": self.weights.to_json() if self.weights is not None else None,
            "verdict": self.verdict,
            "premises": [PRIMITIVE_VECTOR_PREMISE],
        }
        if self.reason:
            out["reason"] = self.reason
        return out


def _restricted_primitive(L: Subspace, P: ParamSet) -> Subspace:
    """Vectors of L killed by every e_i, via a kernel on L's coordinates."""
    es = [gen_image("e", i, P) for i in range(1, P.n + 1)]
    basis = L.basis()
    columns = {}
    for j, b in enumerate(basis):
        col = {}
        for t, e in enumerate(es):
            for r, c in e.apply(b).terms.items():
                col[(t, r)] = c
        columns[j] = col
    out = Subspace(P.shape)
    for coeffs in nullspace(columns, list(range(len(basis))), P.l):
        v: dict = {}
        for j, c in coeffs.items():
            for m, bc in basis[j].terms.items():
                val = v.get(m)
                v[m] = c * bc if val is None else val + c * bc
        out.insert(v)
    return out


def irreducibility_certificate(
    P: ParamSet,
    flag: ConventionFlag | None = None,
    xi: Sequence[int] | None = None,
    cap: int = DEFAULT_SIZE_CAP,
) -> IrreducibilityCertificate:
    """Unique primitive line in V, also within L, and L generated by the top vector.

    With ``xi`` the check runs for the shifted parameters and top vector u_xi.
    """
    sh = P.shape
    top = tuple(int(x) % P.l for x in xi) if xi is not None else sh.zero_index()
    cert = IrreducibilityCertificate(params_digest(P), None, flag, top)
    try:
        spec = validate_params(P)
    except SpecializationError as exc:
        cert.reason = str(exc)
        return cert
    if not spec.ok:
        cert.reason = "failed: " + ", ".join(k for k, v in spec.passes.items() if not v)
        return cert
    cert.lam = spec.lam
    if flag is None:
        flag = calibrate_conventions(P).selected
    cert.flag = flag
    Q = shift_params(P, top) if xi is not None else P
    prim = primitive_subspace(Q, cap)
    L = submodule_closure([SparseVector.basis_vector(sh, top)], module_generators(Q), cap)
    prim_L = _restricted_primitive(L, Q)
    gens = module_generators(Q)
    invariant = all(L.contains(g.apply(b)) for b in L.basis() for g in gens)
    cert.primitive_dim_V = prim.dim
    cert.primitive_dim_L = prim_L.dim
    cert.primitive_is_top_line = prim.is_span_of(top) and prim_L.is_span_of(top)
    cert.closure_equals_L = invariant and L.contains(SparseVector.basis_vector(sh, top))
    cert.dim_L = L.dim
    cert.weights = weight_decompose(L, Q)
    ok = cert.primitive_is_top_line and cert.closure_equals_L
    cert.verdict = "irreducible" if ok else "not certified"
    return cert
