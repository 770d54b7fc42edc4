from __future__ import annotations

import pytest

from helpers import generic_params
from qroot.cyclotomic import Cyclotomic, eps_power
from qroot.operators import op_power, to_matrix
from qroot.representation import ParamSet, default_params, gen_image
from qroot.roots import (
    ALL_FLAGS,
    ConventionFlag,
    RootInterval,
    RootVectorFactory,
    calibrate_conventions,
    degree_bound,
    degree_bound_check,
    djmm_constants,
    nilpotency_check,
    pbw_dimension,
    pbw_f_monomials,
    positive_roots,
    reduced_word,
    root_vector,
)
from qroot.operators import SizeCapExceeded


def test_positive_roots_small():
    assert positive_roots(1) == [RootInterval(1, 1)]
    assert positive_roots(2) == [RootInterval(1, 1), RootInterval(1, 2), RootInterval(2, 2)]
    assert reduced_word(3) == (1, 2, 1, 3, 2, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_positive_roots_count_and_uniqueness(n):
    roots = positive_roots(n)
    assert len(roots) == n * (n + 1) // 2
    assert sorted(roots) == sorted(RootInterval(a, b) for a in range(1, n + 1) for b in range(a, n + 1))


def test_root_interval_data():
    a = RootInterval(2, 4)
    assert a.height == 3 and a.g == 4
    assert [a.pairing(i) for i in range(1, 6)] == [-1, 1, 0, 1, -1]
    with pytest.raises(ValueError):
        RootInterval(3, 2)


def test_flag_parse():
    f = ConventionFlag.parse("alpha-then-ei/high-low")
    assert f == ConventionFlag("alpha-then-ei", "high-low")
    assert str(f) == "alpha-then-ei/high-low"
    with pytest.raises(ValueError):
        ConventionFlag.parse("sideways/low-high")


def test_height_one_roots_are_generators():
    P = default_params(2, 3, (1, 1))
    for flag in ALL_FLAGS:
        for var in ("plain", "bar"):
            assert root_vector("e", RootInterval(2, 2), var, flag, P) == gen_image("e", 2, P)
            assert root_vector("f", RootInterval(1, 1), var, flag, P) == gen_image("f", 1, P)


def test_spec_examples_for_height_two():
    P = default_params(2, 3, (1, 1))
    e1, e2 = gen_image("e", 1, P), gen_image("e", 2, P)
    em1, e = eps_power(3, -1), eps_power(3, 1)
    a12 = RootInterval(1, 2)
    plain = root_vector("e", a12, "plain", ConventionFlag("alpha-then-ei", "low-high"), P)
    assert plain == (e2 * e1).scale(em1) - e1 * e2
    bar = root_vector("e", a12, "bar", ConventionFlag("alpha-then-ei", "low-high"), P)
    assert bar == e1 * e2 - (e2 * e1).scale(e)


def test_f_uses_the_mirrored_order():
    P = default_params(2, 3, (1, 1))
    f1, f2 = gen_image("f", 1, P), gen_image("f", 2, P)
    e = eps_power(3, 1)
    a12 = RootInterval(1, 2)
    flag = ConventionFlag("alpha-then-ei", "low-high")
    assert root_vector("f", a12, "plain", flag, P) == (f1 * f2).scale(e) - f2 * f1
    flag = ConventionFlag("ei-then-alpha", "low-high")
    assert root_vector("f", a12, "plain", flag, P) == (f2 * f1).scale(e) - f1 * f2


@pytest.mark.parametrize("n,l", [(2, 3), (2, 5), (3, 3)])
def test_calibration(n, l):
    P = default_params(n, l, (1,) * n)
    cal = calibrate_conventions(P)
    assert cal.reproduced_as_stated
    assert cal.selected == ConventionFlag("ei-then-alpha", "low-high")
    assert all(cal.bar_power.values())
    assert cal.bar_scaled == {
        "alpha-then-ei/low-high": False,
        "alpha-then-ei/high-low": True,
        "ei-then-alpha/low-high": True,
        "ei-then-alpha/high-low": False,
    }
    # the selected flag really gives ebar_[1,2] = eps e_[1,2] as matrices
    F = RootVectorFactory(P, cal.selected)
    a = RootInterval(1, 2)
    assert to_matrix(F("e", a, "bar")) == to_matrix(F("e", a)).scale(eps_power(l, 1))


def test_calibration_n1_all_flags_coincide():
    cal = calibrate_conventions(default_params(1, 3, (1,)))
    assert all(cal.bar_scaled.values())
    assert cal.selected == ALL_FLAGS[0]


def test_bar_split_independence():
    P = default_params(3, 3, (1, 2, 0))
    F = RootVectorFactory(P, ConventionFlag())
    a = RootInterval(1, 3)
    for kind in "ef":
        assert F(kind, a, "bar", 1) == F(kind, a, "bar", 2)
    with pytest.raises(ValueError):
        F("e", a, "bar", 3)


@pytest.mark.parametrize("n,l,lam", [(1, 3, (1,)), (2, 3, (1, 1)), (2, 5, (4, 1)), (3, 3, (2, 2, 2))])
def test_nilpotency(n, l, lam):
    P = default_params(n, l, lam)
    for flag in ALL_FLAGS:
        rep = nilpotency_check(P, flag)
        assert rep.ok, rep.to_json()
        assert all(rep.t_order_l.values())


def test_nilpotency_spec_examples():
    P = default_params(1, 3, (1,))
    assert to_matrix(op_power(gen_image("f", 1, P), 3)).is_zero()
    P = default_params(2, 3, (1, 1))
    F = RootVectorFactory(P, calibrate_conventions(P).selected)
    assert to_matrix(F("e", RootInterval(1, 2))).power(3).is_zero()


@pytest.mark.parametrize("n,l", [(1, 3), (2, 3), (3, 3), (2, 5)])
def test_constants_are_one_under_specialization(n, l):
    table = djmm_constants(default_params(n, l, (l - 1,) * n))
    one = Cyclotomic.one(l)
    for name in ("C", "Cbar", "D", "Dbar"):
        assert all(v == one for v in table[name].values()), name


def test_constants_detect_perturbation():
    P = default_params(2, 3, (1, 1))
    Q = ParamSet(n=2, l=3, r=(Cyclotomic.rational(3, 2), P.r[1]), s=P.s, a=P.a, b=P.b)
    C = djmm_constants(Q)["C"]
    assert C[(1, 1)] == Cyclotomic.rational(3, 8)
    G = djmm_constants(generic_params(2, 3, 1))
    assert any(v != 1 for v in G["C"].values())


def test_pbw_enumeration():
    assert len(list(pbw_f_monomials(1, 3))) == 3
    tuples = list(pbw_f_monomials(2, 3))
    assert len(tuples) == 27 and tuples == sorted(tuples)
    with pytest.raises(SizeCapExceeded):
        pbw_f_monomials(3, 5, cap=1000)
    assert pbw_dimension(1, 3) == 2 * 3**3
    assert pbw_dimension(2, 3) == 4 * 3**8


def test_degree_bound():
    assert degree_bound(1, 3) == 2
    assert degree_bound(2, 3) == 8
    assert degree_bound(3, 5) == 4 * 10


@pytest.mark.parametrize("n,l", [(1, 3), (2, 3), (2, 5)])
def test_long_words_vanish(n, l):
    rep = degree_bound_check(default_params(n, l, (1,) * n), samples=5, seed=n)
    assert rep.ok
    assert all(len(w) == rep.bound + 1 for w in rep.words)
