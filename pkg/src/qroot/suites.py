"""Relation suites: each check is a list of concrete instances with pass/fail.

Relations are evaluated on operators over V.  By default operators are
compared as merged monomial sums (LinearOp), whose equality is equality of
operators on V because the monomials X^a Z^b form a basis of End(V).
Passing ``as_matrices=True`` evaluates the same relations on explicit sparse
matrices instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .cyclotomic import Cyclotomic, _inv_eps_diff, discrete_log, eps_power, q_integer
from .operators import DEFAULT_SIZE_CAP, LinearOp, SparseMatrix, SparseVector, op_power, to_matrix
from .representation import (
    ParamSet,
    building_block,
    divided_power_image,
    gen_image,
    params_digest,
    shift_params,
    validate_params,
)
from .roots import (
    ConventionFlag,
    RootInterval,
    RootVectorFactory,
    calibrate_conventions,
    degree_bound_check,
    djmm_constants,
    nilpotency_check,
    positive_roots,
)

__all__ = [
    "RELATION_SUITES",
    "EXTRA_SUITES",
    "ALL_SUITES",
    "Instance",
    "SuiteReport",
    "relation_suite",
    "root_relation_instances",
    "action_formula_suite",
    "divided_power_suite",
    "annihilation_suite",
    "shift_transport_suite",
    "nilpotency_suite",
    "constants_suite",
    "degree_suite",
    "run_suite",
]

RELATION_SUITES = ("uq-defining", "lemma32", "prop21", "lemma51", "lemma52")
EXTRA_SUITES = ("power", "action", "annihilation", "shift", "nilpotency", "constants", "degree")
ALL_SUITES = RELATION_SUITES + EXTRA_SUITES


@dataclass
class Instance:
    relation_id: str
    indices: dict
    passed: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"relation-id": self.relation_id, "indices": self.indices, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class SuiteReport:
    suite: str
    digest: str
    flag: ConventionFlag | None
    instances: list[Instance] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(inst.passed for inst in self.instances)

    def failures(self) -> list[Instance]:
        return [inst for inst in self.instances if not inst.passed]

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "params-digest": self.digest,
            "flag": self.flag.to_json() if self.flag is not None else None,
            "instances": [inst.to_json() for inst in self.instances],
            "pass": self.ok,
        }
        out.update(self.extra)
        return out


# -- evaluation backend -----------------------------------------------------------

class _Backend:
    """Converts LinearOps into the objects relations are evaluated on."""

    def __init__(self, P: ParamSet, as_matrices: bool, cap: int):
        self.shape = P.shape
        self.as_matrices = as_matrices
        self.cap = cap
        self._cache: dict[int, object] = {}

    def __call__(self, op: LinearOp):
        if not self.as_matrices:
            return op
        key = id(op)
        hit = self._cache.get(key)
        if hit is None:
            hit = (op, to_matrix(op, self.cap))
            self._cache[key] = hit
        return hit[1]

    def identity(self):
        if self.as_matrices:
            return SparseMatrix.identity(self.shape, self.cap)
        return LinearOp.identity(self.shape)


def _size(x) -> int:
    return x.nnz() if isinstance(x, SparseMatrix) else len(x)


def _check(rid: str, idx: dict, lhs, rhs) -> Instance:
    diff = lhs - rhs
    if diff.is_zero():
        return Instance(rid, idx, True)
    return Instance(rid, idx, False, {"residual_terms": _size(diff)})


def _cartan(i: int, j: int) -> int:
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


def _q2(l: int) -> Cyclotomic:
    return eps_power(l, 1) + eps_power(l, -1)


# -- uq-defining ------------------------------------------------------------------

def _defining_instances(P: ParamSet, B: _Backend) -> list[Instance]:
    n, l = P.n, P.l
    e = [B(gen_image("e", i, P)) for i in range(1, n + 1)]
    f = [B(gen_image("f", i, P)) for i in range(1, n + 1)]
    t = [B(gen_image("t", i, P)) for i in range(1, n + 1)]
    ti = [B(gen_image("t^-1", i, P)) for i in range(1, n + 1)]
    one = B.identity()
    zero = one - one
    inv_d = _inv_eps_diff(l)
    q2 = _q2(l)
    out = []
    for i in range(n):
        idx = {"i": i + 1}
        out.append(_check("t-inverse-left", idx, t[i] * ti[i], one))
        out.append(_check("t-inverse-right", idx, ti[i] * t[i], one))
    for i in range(n):
        for j in range(n):
            idx = {"i": i + 1, "j": j + 1}
            a = _cartan(i + 1, j + 1)
            if i < j:
                out.append(_check("t-commute", idx, t[i] * t[j], t[j] * t[i]))
            out.append(_check("t-conjugates-e", idx, t[i] * e[j] * ti[i], e[j].scale(eps_power(l, a))))
            out.append(_check("t-conjugates-f", idx, t[i] * f[j] * ti[i], f[j].scale(eps_power(l, -a))))
            rhs = (t[i] - ti[i]).scale(inv_d) if i == j else zero
            out.append(_check("e-f-commutator", idx, e[i] * f[j] - f[j] * e[i], rhs))
    for gname, g in (("e", e), ("f", f)):
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                idx = {"i": i + 1, "j": j + 1}
                if abs(i - j) == 1:
                    lhs = g[i] * g[i] * g[j] - (g[i] * g[j] * g[i]).scale(q2) + g[j] * g[i] * g[i]
                    out.append(_check(f"{gname}-serre-cubic", idx, lhs, zero))
                elif i < j:
                    out.append(_check(f"{gname}-serre-commute", idx, g[i] * g[j], g[j] * g[i]))
    return out


# -- lemma32 ----------------------------------------------------------------------

def _block_instances(P: ParamSet) -> list[Instance]:
    n, l = P.n, P.l
    sh = P.shape
    out = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for k in range(i, n + 1):
                A = building_block("A", i, j, shape=sh)
                Bk = building_block("B", i, k, shape=sh)
                ab, ba = A * Bk, Bk * A
                expected = -2 if j < k else (-1 if j == k else 0)
                same_op = ab.shift == ba.shift and ab.phase == ba.phase
                observed = discrete_log(ab.coeff / ba.coeff) if same_op else None
                ok = same_op and observed == expected % l
                wit = {"expected_exponent": expected % l, "observed_exponent": observed}
                out.append(Instance("block-commutation", {"i": i, "j": j, "k": k}, ok, wit))
    return out


# -- root vector relations ----------------------------------------------------------

def root_relation_instances(F: RootVectorFactory, n: int, include_nilpotency: bool = True, backend=None):
    """Yield (relation-id, indices, pass, residual) for the twisted root-vector relations.

    Covers the commutations for (alpha_i, alpha) = 0 and the eps-twisted
    relations for (alpha_i, alpha) = -1, both with i < g(alpha), for e and f.
    """
    conv = backend or (lambda op: op)
    l = F.l
    e1 = eps_power(l, 1)
    rows = []
    roots = positive_roots(n)

    def rec(rid, idx, lhs, rhs):
        diff = lhs - rhs
        rows.append((rid, idx, diff.is_zero(), _size(diff)))

    for a in roots:
        for i in range(1, a.g):
            p = a.pairing(i)
            for kind in "ef":
                gi = conv(F.gen(kind, i))
                ga = conv(F(kind, a))
                idx = {"i": i, "alpha": [a.lo, a.hi]}
                if p == 0:
                    rec(f"{kind}-simple-commutes-with-root", idx, gi * ga, ga * gi)
                elif p == -1:
                    up = RootInterval(i, a.hi)
                    gu = conv(F(kind, up))
                    rec(f"{kind}-simple-twist", idx, (gi * gu).scale(e1), gu * gi)
                    rec(f"{kind}-root-twist", idx, (gu * ga).scale(e1), ga * gu)
    if include_nilpotency:
        for a in roots:
            for kind in "ef":
                p = op_power(F(kind, a), l)
                rows.append((f"{kind}-root-nilpotent", {"alpha": [a.lo, a.hi]}, p.is_zero(), len(p)))
    return rows


def _rows_to_instances(rows) -> list[Instance]:
    return [
        Instance(rid, idx, ok, None if ok else {"residual_terms": res}) for rid, idx, ok, res in rows
    ]


def _prop21_instances(P: ParamSet, F: RootVectorFactory, B: _Backend) -> list[Instance]:
    n, l = P.n, P.l
    out = []
    # generator-level relations
    t = [B(gen_image("t", i, P)) for i in range(1, n + 1)]
    ti = [B(gen_image("t^-1", i, P)) for i in range(1, n + 1)]
    one = B.identity()
    zero = one - one
    inv_d = _inv_eps_diff(l)
    for i in range(n):
        out.append(_check("t-inverse", {"i": i + 1}, t[i] * ti[i], one))
        for j in range(i + 1, n):
            out.append(_check("t-commute", {"i": i + 1, "j": j + 1}, t[i] * t[j], t[j] * t[i]))
    for a in positive_roots(n):
        for i in range(1, n + 1):
            c = a.pairing(i)
            idx = {"i": i, "alpha": [a.lo, a.hi]}
            ea, fa = B(F("e", a)), B(F("f", a))
            out.append(_check("t-conjugates-e", idx, t[i - 1] * ea * ti[i - 1], ea.scale(eps_power(l, c))))
            out.append(_check("t-conjugates-f", idx, t[i - 1] * fa * ti[i - 1], fa.scale(eps_power(l, -c))))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ei, fj = B(F.gen("e", i)), B(F.gen("f", j))
            rhs = (t[i - 1] - ti[i - 1]).scale(inv_d) if i == j else zero
            out.append(_check("e-f-commutator", {"i": i, "j": j}, ei * fj - fj * ei, rhs))
    out.extend(_rows_to_instances(root_relation_instances(F, n, include_nilpotency=False, backend=B)))
    for a in positive_roots(n):
        for kind in "ef":
            p = B(op_power(F(kind, a), l))
            out.append(_check(f"{kind}-root-nilpotent", {"alpha": [a.lo, a.hi]}, p, zero))
    for i in range(n):
        out.append(_check("t-order-2l", {"i": i + 1}, B(op_power(gen_image("t", i + 1, P), 2 * l)), one))
    return out


def _lemma52_instances(P: ParamSet, F: RootVectorFactory, B: _Backend) -> list[Instance]:
    l = P.l
    out = []
    for a in positive_roots(P.n):
        h = a.height
        idx = {"alpha": [a.lo, a.hi]}
        out.append(_check("e-bar-scaled", idx, B(F("e", a, "bar")), B(F("e", a)).scale(eps_power(l, h - 1))))
        out.append(_check("f-bar-scaled", idx, B(F("f", a, "bar")), B(F("f", a)).scale(eps_power(l, 1 - h))))
        for kind in "ef":
            out.append(
                _check(
                    f"{kind}-bar-power",
                    idx,
                    B(op_power(F(kind, a, "bar"), l)),
                    B(op_power(F(kind, a), l)),
                )
            )
        # the result must not depend on where the interval is split
        for j in range(a.lo + 1, a.hi):
            for kind in "ef":
                out.append(
                    _check(
                        f"{kind}-bar-split-independent",
                        {"alpha": [a.lo, a.hi], "split": j},
                        B(F(kind, a, "bar", j)),
                        B(F(kind, a, "bar")),
                    )
                )
    return out


def relation_suite(
    suite: str,
    P: ParamSet,
    flag: ConventionFlag | None = None,
    *,
    as_matrices: bool = False,
    cap: int = DEFAULT_SIZE_CAP,
) -> SuiteReport:
    """Evaluate one named relation suite on the representation given by P."""
    if suite not in RELATION_SUITES:
        raise ValueError(f"unknown relation suite {suite!r}; choose from {RELATION_SUITES}")
    B = _Backend(P, as_matrices, cap)
    extra = {}
    if suite in ("prop21", "lemma51", "lemma52") and flag is None:
        cal = calibrate_conventions(P)
        flag = cal.selected
        extra["calibration"] = cal.to_json()
    report = SuiteReport(suite, params_digest(P), flag if suite in ("prop21", "lemma51", "lemma52") else None)
    report.extra.update(extra)
    if suite == "uq-defining":
        report.instances = _defining_instances(P, B)
    elif suite == "lemma32":
        report.instances = _block_instances(P)
    else:
        F = RootVectorFactory(P, flag)
        if suite == "prop21":
            report.instances = _prop21_instances(P, F, B)
        elif suite == "lemma51":
            report.instances = _rows_to_instances(
                root_relation_instances(F, P.n, include_nilpotency=False, backend=B)
            )
        else:
            report.instances = _lemma52_instances(P, F, B)
    return report


# -- further checks -----------------------------------------------------------------

def _unit(P: ParamSet, m) -> SparseVector:
    return SparseVector.basis_vector(P.shape, tuple(m))


def action_formula_suite(P: ParamSet, cap: int = DEFAULT_SIZE_CAP) -> SuiteReport:
    """e_i u_m = sum_k [m_ik + m_i,k-1 - m_i-1,k-1 - m_i+1,k] u_(m + e_ik + ... + e_in)."""
    sh = P.shape
    n, l = P.n, P.l
    report = SuiteReport("action", params_digest(P), None)
    es = [gen_image("e", i, P) for i in range(1, n + 1)]
    bad: dict[int, list] = {i: [] for i in range(1, n + 1)}
    for m in sh.basis(cap):

        def md(j, k):
            p = sh.pos(j, k)
            return m[p] if p is not None else 0

        v = _unit(P, m)
        for i in range(1, n + 1):
            expected: dict = {}
            for k in range(i, n + 1):
                c = q_integer(l, md(i, k) + md(i, k - 1) - md(i - 1, k - 1) - md(i + 1, k))
                tgt = list(m)
                for p in range(k, n + 1):
                    q = sh.pos(i, p)
                    tgt[q] = (tgt[q] + 1) % l
                tgt = tuple(tgt)
                expected[tgt] = expected[tgt] + c if tgt in expected else c
            if es[i - 1].apply(v) != SparseVector(sh, expected):
                bad[i].append(list(m))
    for i in range(1, n + 1):
        wit = {"first_bad_m": bad[i][0], "bad_count": len(bad[i])} if bad[i] else None
        report.instances.append(Instance("e-action-formula", {"i": i}, not bad[i], wit))
    return report


def divided_power_suite(P: ParamSet, m_max: int | None = None) -> SuiteReport:
    """Closed-form divided-power images against plain operator powers."""
    if m_max is None:
        m_max = P.l + 1
    report = SuiteReport("power", params_digest(P), None)
    for g in ("e", "f"):
        for i in range(1, P.n + 1):
            base = gen_image(g, i, P)
            power = LinearOp.identity(P.shape)
            for m in range(1, m_max + 1):
                power = base.compose(power)
                report.instances.append(
                    _check(f"{g}-divided-power", {"i": i, "m": m}, divided_power_image(g, i, m, P), power)
                )
    return report


def annihilation_suite(P: ParamSet) -> SuiteReport:
    """f_i^(lam_i+1) u_0 = 0 by matrix power and closed form; f_i^lam_i u_0 != 0 reported."""
    spec = validate_params(P)
    lam = spec.lam
    sh = P.shape
    u0 = _unit(P, sh.zero_index())
    report = SuiteReport("annihilation", params_digest(P), None)
    nonzero_below = {}
    for i in range(1, P.n + 1):
        m = lam[i - 1] + 1
        f = gen_image("f", i, P)
        by_power = op_power(f, m).apply(u0)
        by_formula = divided_power_image("f", i, m, P).apply(u0)
        idx = {"i": i, "power": m}
        report.instances.append(Instance("f-power-kills-top", idx, not by_power, None if not by_power else {"terms": len(by_power)}))
        report.instances.append(
            Instance("f-closed-form-kills-top", idx, not by_formula, None if not by_formula else {"terms": len(by_formula)})
        )
        if lam[i - 1] >= 1:
            nonzero_below[str(i)] = bool(op_power(f, lam[i - 1]).apply(u0))
    report.extra["f_power_lambda_nonzero (observation)"] = nonzero_below
    return report


def shift_transport_suite(
    P: ParamSet,
    xi: Sequence[int],
    mus: Iterable | None = None,
    cap: int = DEFAULT_SIZE_CAP,
) -> SuiteReport:
    """Coefficients of X u_mu under P equal those of X u_(mu+xi) under the shifted parameters."""
    sh = P.shape
    xi = tuple(int(x) % P.l for x in xi)
    Q = shift_params(P, xi)
    report = SuiteReport("shift", params_digest(P), None)
    report.extra["xi"] = list(xi)
    mus = list(sh.basis(cap)) if mus is None else [tuple(m) for m in mus]
    for g in ("e", "f", "t"):
        for i in range(1, P.n + 1):
            a, b = gen_image(g, i, P), gen_image(g, i, Q)
            bad = []
            for mu in mus:
                lhs = a.apply(_unit(P, mu))
                moved = SparseVector(sh, {sh.add(m, xi): c for m, c in lhs.terms.items()})
                if b.apply(_unit(P, sh.add(mu, xi))) != moved:
                    bad.append(list(mu))
            wit = {"first_bad_mu": bad[0], "bad_count": len(bad)} if bad else None
            report.instances.append(Instance(f"{g}-shift-transport", {"i": i, "mu_count": len(mus)}, not bad, wit))
    return report


def random_mus(P: ParamSet, count: int, seed: int = 0) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    return [tuple(rng.randrange(P.l) for _ in range(P.shape.N)) for _ in range(count)]


def nilpotency_suite(P: ParamSet, flag: ConventionFlag) -> SuiteReport:
    rep = nilpotency_check(P, flag)
    report = SuiteReport("nilpotency", params_digest(P), flag)
    for key, ok in sorted(rep.root_powers_vanish.items()):
        report.instances.append(Instance("root-power-vanishes", {"root": key}, ok))
    for i, ok in sorted(rep.t_order_2l.items()):
        report.instances.append(Instance("t-order-2l", {"i": i}, ok))
    report.extra["t_power_l_is_identity (observation)"] = {str(i): v for i, v in sorted(rep.t_order_l.items())}
    return report


def constants_suite(P: ParamSet) -> SuiteReport:
    """C_ik and Cbar_ik equal 1 under a specialization; all four tables reported."""
    table = djmm_constants(P)
    report = SuiteReport("constants", params_digest(P), None)
    one = Cyclotomic.one(P.l)
    for name in ("C", "Cbar"):
        for (i, k), v in sorted(table[name].items()):
            report.instances.append(
                Instance(f"{name}-is-one", {"i": i, "k": k}, v == one, None if v == one else {"value": v.to_text()})
            )
    report.extra["values"] = {
        name: {f"{i},{k}": v.to_text() for (i, k), v in sorted(vals.items())} for name, vals in table.items()
    }
    return report


def degree_suite(P: ParamSet, samples: int = 10, seed: int = 0) -> SuiteReport:
    rep = degree_bound_check(P, samples=samples, seed=seed)
    report = SuiteReport("degree", params_digest(P), None)
    for w, ok in zip(rep.words, rep.vanish):
        report.instances.append(Instance("long-e-word-vanishes", {"length": len(w), "word": list(w)}, ok))
    report.extra["J"] = rep.bound
    return report


def run_suite(
    name: str,
    P: ParamSet,
    flag: ConventionFlag | None = None,
    *,
    m_max: int | None = None,
    xi: Sequence[int] | None = None,
    cap: int = DEFAULT_SIZE_CAP,
    as_matrices: bool = False,
) -> SuiteReport:
    """Dispatch by suite name (relation suites and the extra checks)."""
    if name in RELATION_SUITES:
        return relation_suite(name, P, flag, as_matrices=as_matrices, cap=cap)
    if name == "power":
        return divided_power_suite(P, m_max)
    if name == "action":
        return action_formula_suite(P, cap)
    if name == "annihilation":
        return annihilation_suite(P)
    if name == "shift":
        if xi is None:
            xi = tuple(1 for _ in range(P.shape.N))
        return shift_transport_suite(P, xi, cap=cap)
    if name == "nilpotency":
        return nilpotency_suite(P, flag or calibrate_conventions(P).selected)
    if name == "constants":
        return constants_suite(P)
    if name == "degree":
        return degree_suite(P)
    raise ValueError(f"unknown suite {name!r}; choose from {ALL_SUITES}")
