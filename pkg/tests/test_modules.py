from __future__ import annotations

import random

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import generic_params
from qroot.cyclotomic import Cyclotomic
from qroot.modules import (
    Subspace,
    dimension_report,
    irreducibility_certificate,
    kernel_intersection,
    module_generators,
    pbw_span,
    primitive_subspace,
    submodule_closure,
    weight_decompose,
)
from qroot.operators import LinearOp, MonomialOp, SizeCapExceeded, SpaceShape, SparseVector
from qroot.representation import ParamSet, default_params, gen_image, shift_params
from qroot.roots import ConventionFlag, RootVectorFactory, positive_roots


def u(sh, m):
    return SparseVector.basis_vector(sh, tuple(m))


def closure_of_top(P):
    return submodule_closure([u(P.shape, P.shape.zero_index())], module_generators(P))


# -- Subspace -------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(rows=st.lists(st.lists(st.integers(-3, 3), min_size=6, max_size=6), min_size=1, max_size=8))
def test_subspace_rank_matches_sympy(rows):
    S = Subspace()
    for r in rows:
        S.insert({k: Cyclotomic.rational(3, c) for k, c in enumerate(r) if c})
    assert S.dim == sp.Matrix(rows).rank()
    # echelon invariants
    pivots = S.pivots()
    for p in pivots:
        row = S.rows[p]
        assert min(row) == p and row[p] == 1
        assert all(q not in row for q in pivots if q != p)
    for r in rows:
        assert S.contains({k: Cyclotomic.rational(3, c) for k, c in enumerate(r) if c})


def test_subspace_is_order_independent():
    rng = random.Random(0)
    vecs = [{k: Cyclotomic.rational(5, rng.randint(-2, 2)) for k in range(5)} for _ in range(4)]
    a = Subspace.span(None, vecs)
    b = Subspace.span(None, vecs[::-1])
    assert a == b


# -- kernels ----------------------------------------------------------------------

def test_kernel_trivial_cases():
    sh = SpaceShape(2, 3)
    assert kernel_intersection([], sh).dim == 27
    assert kernel_intersection([LinearOp.identity(sh)]).dim == 0
    Z = MonomialOp.Z(sh, 1, 1).as_linear(sh)
    # Z - 1 kills exactly the vectors with m_11 = 0
    K = kernel_intersection([Z - LinearOp.identity(sh)])
    assert K.dim == 9 and all(p[0] == 0 for p in K.pivots())


@pytest.mark.parametrize("n,l,lam", [(1, 3, (1,)), (2, 3, (1, 2)), (2, 5, (0, 4)), (3, 3, (1, 1, 1))])
def test_primitive_line(n, l, lam):
    P = default_params(n, l, lam)
    S = primitive_subspace(P)
    assert S.is_span_of(P.shape.zero_index())


def test_primitive_line_after_shift():
    P = default_params(2, 3, (1, 1))
    xi = (2, 0, 1)
    assert primitive_subspace(shift_params(P, xi)).is_span_of(xi)


@pytest.mark.parametrize("n,l,seed", [(1, 3, 0), (2, 3, 1), (1, 5, 2)])
def test_generic_parameters_have_no_primitive_vector(n, l, seed):
    assert primitive_subspace(generic_params(n, l, seed)).dim == 0


# -- closure and dimensions -------------------------------------------------------

def test_closure_spec_examples():
    assert closure_of_top(default_params(1, 3, (0,))).dim == 1
    L = closure_of_top(default_params(1, 3, (1,)))
    assert L.dim == 2 and L.pivots() == [(0,), (2,)]
    assert closure_of_top(default_params(2, 3, (2, 2))).dim == 27


@pytest.mark.parametrize("l", [3, 5])
def test_n1_dimensions(l):
    for lam in range(l):
        rep = dimension_report(default_params(1, l, (lam,)))
        assert rep.dim_closure == rep.dim_pbw == lam + 1


def test_strategies_agree_at_2_3():
    for lam in [(1, 1), (0, 2), (2, 1)]:
        rep = dimension_report(default_params(2, 3, lam))
        assert rep.agree and rep.dim_pbw == rep.dim_closure


def test_pbw_span_is_invariant_and_contains_top():
    P = default_params(2, 3, (1, 1))
    B = pbw_span(P, ConventionFlag())
    assert B.contains(u(P.shape, (0, 0, 0)))
    for b in B.basis():
        for g in module_generators(P):
            assert B.contains(g.apply(b))


def test_closure_is_invariant_under_root_vectors():
    P = default_params(2, 3, (1, 2))
    L = closure_of_top(P)
    F = RootVectorFactory(P, ConventionFlag())
    for a in positive_roots(2):
        for kind in "ef":
            for var in ("plain", "bar"):
                op = F(kind, a, var)
                assert all(L.contains(op.apply(b)) for b in L.basis())


def test_closure_cap():
    sh = SpaceShape(3, 3)
    with pytest.raises(SizeCapExceeded):
        submodule_closure([u(sh, sh.zero_index())], [LinearOp.identity(sh)], cap=100)


# -- weights ------------------------------------------------------------------------

def test_weights_spec_examples():
    P = default_params(1, 3, (1,))
    line = Subspace.span(P.shape, [u(P.shape, (0,))])
    assert weight_decompose(line, P).multiplicities == {(1,): 1}
    rep = weight_decompose(closure_of_top(P), P)
    assert rep.multiplicities == {(1,): 1, (2,): 1} and rep.total == 2


def test_weight_formula_on_basis_vectors():
    P = default_params(2, 5, (3, 1))
    sh = P.shape
    for m in [(0, 0, 0), (1, 2, 3), (4, 4, 1)]:
        md = dict(zip(sh.pairs, m))
        rep = weight_decompose(Subspace.span(sh, [u(sh, m)]), P)
        w = tuple(
            (P.lam[i - 1] + 2 * md.get((i, 2), 0) - md.get((i - 1, 2), 0) - md.get((i + 1, 2), 0)) % 5
            for i in (1, 2)
        )
        assert rep.multiplicities == {w: 1}


def test_weights_reject_non_invariant_subspace():
    P = default_params(1, 3, (1,))
    v = SparseVector(P.shape, {(0,): Cyclotomic.one(3), (1,): Cyclotomic.one(3)})
    with pytest.raises(ValueError):
        weight_decompose(Subspace.span(P.shape, [v]), P)


@pytest.mark.parametrize("n,l", [(2, 3), (2, 5), (3, 3)])
def test_weight_multiplicities_total(n, l):
    P = default_params(n, l, (1,) * n)
    L = closure_of_top(P)
    assert weight_decompose(L, P).total == L.dim


# -- certificates ---------------------------------------------------------------------

@pytest.mark.parametrize("n,l,lam", [(1, 3, (1,)), (2, 3, (1, 1))])
def test_certificate_irreducible(n, l, lam):
    cert = irreducibility_certificate(default_params(n, l, lam))
    assert cert.verdict == "irreducible"
    assert cert.primitive_dim_V == cert.primitive_dim_L == 1
    js = cert.to_json()
    assert js["premises"] and js["closure_equals_L"]


def test_certificate_refuses_broken_parameters():
    P = default_params(2, 3, (1, 1))
    Q = ParamSet(n=2, l=3, r=(Cyclotomic.rational(3, 2), P.r[1]), s=P.s, a=P.a, b=P.b)
    assert irreducibility_certificate(Q).verdict == "specialization invalid"
    assert irreducibility_certificate(generic_params(1, 3, 0)).verdict == "specialization invalid"


def test_certificate_with_shift():
    cert = irreducibility_certificate(default_params(1, 3, (1,)), xi=(1,))
    assert cert.verdict == "irreducible"
    assert cert.top == (1,) and cert.dim_L == 2
