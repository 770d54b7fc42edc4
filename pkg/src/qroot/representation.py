"""Maximal cyclic representations of U_eps(sl_{n+1}) on V.

Parameters (r, s, a, b) are nonzero elements of Q(zeta_l).  The generator
images are

    e_i -> sum_{k=i}^{n} A_ik {r_i B_ik}
    f_i -> sum_{k=1}^{i} A*_{n+1-i,n+1-k} {s_i B*_{n+1-i,n+1-k}}
    t_i -> (r_i / s_i) z_in^2 z_{i-1,n}^-1 z_{i+1,n}^-1

with A_ik = x_ik x_{i,k+1} ... x_in, B_ik = z_ik z_{i,k-1} z_{i-1,k-1}^-1 z_{i+1,k}^-1,
{y} = (y - y^-1)/(eps - eps^-1), and x_jk -> a_jk X_jk, z_jk -> b_jk Z_jk.
Factors whose pair (j, k) is out of range are the identity.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cyclotomic import (
    Cyclotomic,
    _inv_eps_diff,
    discrete_log,
    eps_power,
    gaussian_multinomial,
    parse_cyclotomic,
)
from .operators import LinearOp, MonomialOp, SpaceShape

__all__ = [
    "ParamSet",
    "SpecializationReport",
    "SpecializationError",
    "default_params",
    "validate_params",
    "building_block",
    "block_word",
    "gen_image",
    "gen_images",
    "divided_power_image",
    "shift_params",
    "load_params",
    "params_to_json",
    "params_digest",
]

Pair = tuple  # (j, k)


class SpecializationError(ValueError):
    """Parameters cannot be read as a specialization (lambda undefined)."""


@dataclass(frozen=True)
class ParamSet:
    n: int
    l: int
    r: tuple
    s: tuple
    a: Mapping[Pair, Cyclotomic]
    b: Mapping[Pair, Cyclotomic]
    lam: tuple | None = None

    def __post_init__(self):
        sh = SpaceShape(self.n, self.l)
        if len(self.r) != self.n or len(self.s) != self.n:
            raise ValueError("r and s need n entries")
        for name in ("a", "b"):
            got = set(getattr(self, name))
            if got != set(sh.pairs):
                raise ValueError(f"{name} must be indexed by the pairs {list(sh.pairs)}")
        for v in list(self.r) + list(self.s) + list(self.a.values()) + list(self.b.values()):
            if v.l != self.l:
                raise ValueError("parameter lives in the wrong cyclotomic field")
            if v.is_zero():
                raise ValueError("parameters must be nonzero")
        if self.lam is not None:
            if len(self.lam) != self.n or not all(0 <= x < self.l for x in self.lam):
                raise ValueError(f"lambda entries must lie in [0, {self.l})")

    @property
    def shape(self) -> SpaceShape:
        return SpaceShape(self.n, self.l)

    def b_at(self, j: int, k: int) -> Cyclotomic:
        """b_jk, with out-of-range pairs read as 1."""
        return self.b.get((j, k)) or Cyclotomic.one(self.l)

    def a_at(self, j: int, k: int) -> Cyclotomic:
        return self.a.get((j, k)) or Cyclotomic.one(self.l)

    def __hash__(self):
        return hash(params_digest(self))


@dataclass
class SpecializationReport:
    passes: dict[str, bool]
    lam: tuple
    witnesses: dict[str, tuple] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passes.values())

    def to_json(self) -> dict:
        return {
            "passes": dict(self.passes),
            "lambda": list(self.lam),
            "witnesses": {
                k: {"i": w[0], "k": w[1], "value": w[2].to_text()} for k, w in sorted(self.witnesses.items())
            },
            "ok": self.ok,
        }


def default_params(n: int, l: int, lam: Sequence[int]) -> ParamSet:
    """a = b = 1, r_i = 1, s_i = eps^-lambda_i."""
    lam = tuple(int(x) for x in lam)
    if len(lam) != n:
        raise ValueError(f"lambda needs {n} entries, got {len(lam)}")
    if not all(0 <= x < l for x in lam):
        raise ValueError(f"lambda entries must lie in [0, {l}), got {lam}")
    sh = SpaceShape(n, l)
    one = Cyclotomic.one(l)
    return ParamSet(
        n=n,
        l=l,
        r=tuple(one for _ in range(n)),
        s=tuple(eps_power(l, -x) for x in lam),
        a={p: one for p in sh.pairs},
        b={p: one for p in sh.pairs},
        lam=lam,
    )


def _a_product(P: ParamSet, i: int, k: int) -> Cyclotomic:
    out = Cyclotomic.one(P.l)
    for t in range(k, P.n + 1):
        out = out * P.a_at(i, t)
    return out


def _rb_product(P: ParamSet, i: int, k: int) -> Cyclotomic:
    b = P.b_at
    return P.r[i - 1] * b(i, k) * b(i, k - 1) / (b(i - 1, k - 1) * b(i + 1, k))


def _t_scalar(P: ParamSet, i: int) -> Cyclotomic:
    b = P.b_at
    n = P.n
    return P.r[i - 1] / P.s[i - 1] * b(i, n) * b(i, n) / (b(i - 1, n) * b(i + 1, n))


def _s_identity(P: ParamSet, i: int, k: int) -> Cyclotomic:
    b = P.b_at
    n = P.n
    return (
        P.s[i - 1]
        * b(i + 1 - k, n - k)
        * b(i - k, n + 1 - k)
        / (b(i + 1 - k, n + 1 - k) * b(i - k, n - k))
    )


def validate_params(P: ParamSet) -> SpecializationReport:
    """Check the specialization equations and the derived s-identity.

    Failed equations are reported with the first failing indices.  Raises
    SpecializationError when the t-scalar of some i is not a power of eps.
    """
    n, l = P.n, P.l
    one = Cyclotomic.one(l)
    passes = {"a-product": True, "rb-product": True, "t-scalar": True, "s-identity": True}
    wit: dict[str, tuple] = {}

    def fail(tag, i, k, val):
        if passes[tag]:
            passes[tag] = False
            wit[tag] = (i, k, val)

    for i in range(1, n + 1):
        for k in range(i, n + 1):
            v = _a_product(P, i, k)
            if v != one:
                fail("a-product", i, k, v)
            v = _rb_product(P, i, k)
            if v != one:
                fail("rb-product", i, k, v)

    lam = []
    for i in range(1, n + 1):
        v = _t_scalar(P, i)
        d = discrete_log(v)
        if d is None:
            raise SpecializationError(
                f"t-scalar for i={i} is {v}, not a power of eps; lambda undefined"
            )
        if P.lam is not None and d != P.lam[i - 1]:
            fail("t-scalar", i, n, v)
        lam.append(d)

    for i in range(1, n + 1):
        for k in range(1, i + 1):
            v = _s_identity(P, i, k)
            if v != eps_power(l, -lam[i - 1]):
                fail("s-identity", i, k, v)

    if passes["rb-product"] and passes["t-scalar"] and not passes["s-identity"]:
        raise AssertionError(f"rb-product and t-scalar hold but s-identity fails at {wit['s-identity'][:2]}")
    return SpecializationReport(passes=passes, lam=tuple(lam), witnesses=wit)


# -- building blocks ------------------------------------------------------------

def _word_add(word: dict, j: int, k: int, e: int, n: int) -> None:
    if 1 <= j <= k <= n:
        word[(j, k)] = word.get((j, k), 0) + e


def block_word(kind: str, i: int, k: int, n: int) -> tuple[dict, dict]:
    """Integer exponents ({pair: x-exp}, {pair: z-exp}) of A, B, A*, B*.

    Exponents are kept as signed integers so parameter scalars can be read
    off before reduction mod l.
    """
    if not (1 <= i <= k <= n):
        raise ValueError(f"block index ({i}, {k}) out of range for n={n}")
    xs: dict = {}
    zs: dict = {}
    base = kind.rstrip("*")
    if base == "A":
        for t in range(k, n + 1):
            _word_add(xs, i, t, 1, n)
    elif base == "B":
        _word_add(zs, i, k, 1, n)
        _word_add(zs, i, k - 1, 1, n)
        _word_add(zs, i - 1, k - 1, -1, n)
        _word_add(zs, i + 1, k, -1, n)
    else:
        raise ValueError(f"unknown block kind {kind!r}")
    if kind.endswith("*"):
        xs = {(kk + 1 - j, kk): -e for (j, kk), e in xs.items()}
        zs = {(kk + 1 - j, kk): -e for (j, kk), e in zs.items()}
    xs = {p: e for p, e in xs.items() if e}
    zs = {p: e for p, e in zs.items() if e}
    return xs, zs


def _word_monomial(sh: SpaceShape, xs: dict, zs: dict, coeff: Cyclotomic) -> MonomialOp:
    shift = [0] * sh.N
    phase = [0] * sh.N
    for (j, k), e in xs.items():
        shift[sh.pos(j, k)] = e % sh.l
    for (j, k), e in zs.items():
        phase[sh.pos(j, k)] = e % sh.l
    return MonomialOp(coeff, tuple(shift), tuple(phase))


def building_block(kind: str, i: int, k: int, P: ParamSet | None = None, *, shape: SpaceShape | None = None) -> MonomialOp:
    """The monomial A_ik, B_ik, A*_ik or B*_ik.

    Without parameters the bare group element is returned (coefficient 1);
    with P the parameter scalars of x -> aX, z -> bZ are included.
    """
    sh = shape or P.shape
    xs, zs = block_word(kind, i, k, sh.n)
    coeff = Cyclotomic.one(sh.l) if P is None else _word_scalar(P, xs, zs)
    return _word_monomial(sh, xs, zs, coeff)


def _word_scalar(P: ParamSet, xs: dict, zs: dict) -> Cyclotomic:
    out = Cyclotomic.one(P.l)
    for (j, k), e in xs.items():
        out = out * P.a[(j, k)] ** e
    for (j, k), e in zs.items():
        out = out * P.b[(j, k)] ** e
    return out


def _brace_diag(sh: SpaceShape, y: MonomialOp) -> LinearOp:
    # {y} for a diagonal monomial y = c Z^b
    inv = y.inverse()
    return (y.as_linear(sh) - inv.as_linear(sh)).scale(_inv_eps_diff(sh.l))


def _gen_terms(g: str, i: int, P: ParamSet) -> list[tuple[MonomialOp, MonomialOp]]:
    """[(shift part, diagonal argument of the brace)] for e_i or f_i, k ascending in block index."""
    n = P.n
    out = []
    if g == "e":
        for k in range(i, n + 1):
            A = building_block("A", i, k, P)
            B = building_block("B", i, k, P)
            out.append((A, B * P.r[i - 1]))
    elif g == "f":
        j = n + 1 - i
        for k in range(j, n + 1):
            A = building_block("A*", j, k, P)
            B = building_block("B*", j, k, P)
            out.append((A, B * P.s[i - 1]))
    else:
        raise ValueError(f"unknown generator {g!r}")
    return out


def gen_image(g: str, i: int, P: ParamSet) -> LinearOp:
    """Image of e_i, f_i or t_i as an operator on V."""
    n = P.n
    if not (1 <= i <= n):
        raise ValueError(f"generator index {i} out of range for n={n}")
    sh = P.shape
    if g == "t":
        zs: dict = {}
        _word_add(zs, i, n, 2, n)
        _word_add(zs, i - 1, n, -1, n)
        _word_add(zs, i + 1, n, -1, n)
        coeff = P.r[i - 1] / P.s[i - 1] * _word_scalar(P, {}, zs)
        return _word_monomial(sh, {}, zs, coeff).as_linear(sh)
    if g == "t^-1":
        return gen_image("t", i, P).monomials()[0].inverse().as_linear(sh)
    total = LinearOp.zero(sh)
    for A, y in _gen_terms(g, i, P):
        total = total + A.as_linear(sh).compose(_brace_diag(sh, y))
    return total


def gen_images(P: ParamSet) -> dict[str, list[LinearOp]]:
    return {g: [gen_image(g, i, P) for i in range(1, P.n + 1)] for g in ("e", "f", "t", "t^-1")}


def divided_power_image(g: str, i: int, m: int, P: ParamSet) -> LinearOp:
    """Closed form of the image of g_i^m as a sum over block chains.

    Each term is [m]!/prod[c_r]! times prod_r A_{k_r}^{c_r} times
    prod_r prod_{s=1}^{c_r} {y_{k_r} eps^{nu_r - s}}, summed over
    k_1 > ... > k_p and m = nu_1 > ... > nu_p >= 1, c_r = nu_r - nu_{r+1}.
    The multinomial is evaluated from its polynomial form, so no q-factorial
    is ever inverted.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if not (1 <= i <= P.n):
        raise ValueError(f"generator index {i} out of range for n={P.n}")
    sh = P.shape
    l = sh.l
    blocks = _gen_terms(g, i, P)  # ascending block index
    total = LinearOp.zero(sh)
    for p in range(1, min(m, len(blocks)) + 1):
        for chain in itertools.combinations(range(len(blocks)), p):
            ks = chain[::-1]  # k_1 > k_2 > ... > k_p
            for mids in itertools.combinations(range(m - 1, 0, -1), p - 1):
                nus = (m,) + mids + (0,)
                parts = [nus[r] - nus[r + 1] for r in range(p)]
                coeff = gaussian_multinomial(l, m, parts)
                if coeff.is_zero():
                    continue
                shift_op = MonomialOp(coeff, sh.zero_index(), sh.zero_index())
                diag = LinearOp.identity(sh)
                for r in range(p):
                    A, y = blocks[ks[r]]
                    for _ in range(parts[r]):
                        shift_op = shift_op * A
                    for s in range(1, parts[r] + 1):
                        ys = MonomialOp(y.coeff.mul_eps(nus[r] - s), y.shift, y.phase)
                        diag = diag.compose(_brace_diag(sh, ys))
                total = total + shift_op.as_linear(sh).compose(diag)
    return total


def shift_params(P: ParamSet, xi: Sequence[int]) -> ParamSet:
    """Replace b by b^(xi)_jk = eps^-xi_jk b_jk; the lambda tag is dropped."""
    sh = P.shape
    xi = sh.index(xi)
    b = {p: P.b[p].mul_eps(-xi[sh.pos(*p)]) for p in sh.pairs}
    return ParamSet(n=P.n, l=P.l, r=P.r, s=P.s, a=dict(P.a), b=b, lam=None)


# -- serialisation ----------------------------------------------------------

def _pair_key(p: Pair) -> str:
    return f"{p[0]},{p[1]}"


def params_to_json(P: ParamSet) -> dict:
    out = {
        "n": P.n,
        "l": P.l,
        "r": [v.to_text() for v in P.r],
        "s": [v.to_text() for v in P.s],
        "a": {_pair_key(p): P.a[p].to_text() for p in P.shape.pairs},
        "b": {_pair_key(p): P.b[p].to_text() for p in P.shape.pairs},
    }
    if P.lam is not None:
        out["lambda"] = list(P.lam)
    return out


def load_params(data: Mapping | str) -> ParamSet:
    """Parse the JSON parameter format (a dict or a JSON string)."""
    if isinstance(data, str):
        data = json.loads(data)
    n, l = int(data["n"]), int(data["l"])
    sh = SpaceShape(n, l)

    def pmap(d):
        out = {}
        for key, v in d.items():
            j, k = (int(x) for x in key.split(","))
            out[(j, k)] = parse_cyclotomic(v, l)
        missing = set(sh.pairs) - set(out)
        if missing:
            raise ValueError(f"missing pairs {sorted(missing)}")
        return out

    lam = data.get("lambda")
    return ParamSet(
        n=n,
        l=l,
        r=tuple(parse_cyclotomic(v, l) for v in data["r"]),
        s=tuple(parse_cyclotomic(v, l) for v in data["s"]),
        a=pmap(data["a"]),
        b=pmap(data["b"]),
        lam=tuple(lam) if lam is not None else None,
    )


def params_digest(P: ParamSet) -> str:
    import hashlib

    blob = json.dumps(params_to_json(P), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
