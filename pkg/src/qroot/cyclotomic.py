"""Exact arithmetic in the cyclotomic field Q(zeta_l), l odd.

Elements are residues of rational polynomials in ``eps`` modulo the l-th
cyclotomic polynomial.  Internally an element stores integer numerators and
one positive common denominator, normalised so that equal field elements
have identical representations.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Cyclotomic",
    "CyclotomicZeroDivisionError",
    "cyclotomic_polynomial",
    "reduce",
    "invert",
    "eps",
    "eps_power",
    "q_integer",
    "q_factorial",
    "gaussian_binomial_laurent",
    "gaussian_multinomial",
    "brace",
    "discrete_log",
    "parse_cyclotomic",
]


class CyclotomicZeroDivisionError(ZeroDivisionError):
    """Raised when a zero element of Q(zeta_l) is inverted."""


def _check_level(l: int) -> None:
    if not isinstance(l, int) or isinstance(l, bool):
        raise TypeError(f"level must be an int, got {l!r}")
    if l <= 1 or l % 2 == 0:
        raise ValueError(f"l must be odd > 1, got {l}")


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic; coefficients low -> high
    num = list(num)
    dq = len(den) - 1
    if len(num) - 1 < dq:
        return [0], num
    quot = [0] * (len(num) - dq)
    for k in range(len(num) - 1, dq - 1, -1):
        c = num[k]
        if c:
            quot[k - dq] = c
            for j in range(dq + 1):
                num[k - dq + j] -= c * den[j]
    return quot, num[:dq] or [0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(l: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the l-th cyclotomic polynomial.

    Computed as (x^l - 1) divided by the cyclotomic polynomials of the proper
    divisors of l.
    """
    if l < 1:
        raise ValueError("l must be positive")
    poly = [-1] + [0] * (l - 1) + [1]
    for d in range(1, l):
        if l % d == 0:
            quot, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
            poly = quot
    return tuple(poly)


class _Field:
    """Per-level constant tables shared by every element of Q(zeta_l)."""

    def __init__(self, l: int):
        self.l = l
        self.phi = cyclotomic_polynomial(l)
        self.d = len(self.phi) - 1
        d = self.d
        # red[k] = coefficients of x^k mod phi, for 0 <= k < l
        red: list[tuple[int, ...]] = []
        cur = [0] * d
        cur[0] = 1
        for _ in range(l):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(d):
                    cur[j] -= top * self.phi[j]
        self.red = red
        # sparse form of the tail rows used during reduction
        self.tail = [
            [(j, v) for j, v in enumerate(red[k]) if v] for k in range(d, l)
        ]


@lru_cache(maxsize=None)
def _field(l: int) -> _Field:
    _check_level(l)
    return _Field(l)


def _fold(l: int, vec: Sequence[int]) -> list[int]:
    """Reduce a length-l vector (coefficients of x^0..x^{l-1}) modulo phi_l."""
    F = _field(l)
    d = F.d
    out = list(vec[:d])
    for k, row in enumerate(F.tail, start=d):
        c = vec[k]
        if c:
            for j, v in row:
                out[j] += c * v
    return out


class Cyclotomic:
    """An element of Q(zeta_l)."""

    __slots__ = ("l", "nums", "den", "_hash")

    def __init__(self, l: int, nums: Sequence[int], den: int = 1):
        # trusted fast path: caller passes length-d integer numerators
        if den < 0:
            nums = [-v for v in nums]
            den = -den
        if den == 0:
            raise CyclotomicZeroDivisionError("zero denominator")
        g = gcd(den, *nums)
        if g > 1:
            nums = [v // g for v in nums]
            den //= g
        if not any(nums):
            den = 1
        self.l = l
        self.nums = tuple(nums)
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_coeffs(cls, l: int, coeffs: Sequence[Union[int, Fraction]]) -> "Cyclotomic":
        """Element with the given canonical coefficients (length must be deg phi_l)."""
        F = _field(l)
        if len(coeffs) != F.d:
            raise ValueError(f"expected {F.d} coefficients for l={l}, got {len(coeffs)}")
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls(l, [int(c * den) for c in fr], den)

    @classmethod
    def zero(cls, l: int) -> "Cyclotomic":
        return cls(l, [0] * _field(l).d)

    @classmethod
    def one(cls, l: int) -> "Cyclotomic":
        return cls.rational(l, 1)

    @classmethod
    def rational(cls, l: int, value: Union[int, Fraction]) -> "Cyclotomic":
        F = _field(l)
        value = Fraction(value)
        nums = [0] * F.d
        nums[0] = value.numerator
        return cls(l, nums, value.denominator)

    # -- basic properties ---------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.den) for v in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def __eq__(self, other) -> bool:
        if isinstance(other, Cyclotomic):
            return self.l == other.l and self.den == other.den and self.nums == other.nums
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.l, self.nums, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"Cyclotomic({self.to_text()!r})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("eps" if k == 1 else f"eps^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_text(self) -> str:
        """Canonical text form ``"l; c_0, c_1, ..."`` with each c as ``p/q``."""
        parts = []
        for v in self.nums:
            c = Fraction(v, self.den)
            parts.append(f"{c.numerator}/{c.denominator}")
        return f"{self.l}; " + ", ".join(parts)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.l != self.l:
                raise ValueError(f"level mismatch: {self.l} vs {other.l}")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.rational(self.l, other)
        raise TypeError(f"cannot combine Cyclotomic with {type(other).__name__}")

    def __add__(self, other) -> "Cyclotomic":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return Cyclotomic(self.l, [a + b for a, b in zip(self.nums, o.nums)], self.den)
        return Cyclotomic(
            self.l,
            [a * o.den + b * self.den for a, b in zip(self.nums, o.nums)],
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.l, [-a for a in self.nums], self.den)

    def __sub__(self, other) -> "Cyclotomic":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Cyclotomic":
        return (-self) + other

    def __mul__(self, other) -> "Cyclotomic":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Cyclotomic(
                self.l, [a * other.numerator for a in self.nums], self.den * other.denominator
            )
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        l = self.l
        acc = [0] * l
        bn = o.nums
        for i, a in enumerate(self.nums):
            if a:
                for j, b in enumerate(bn):
                    if b:
                        acc[(i + j) % l] += a * b
        return Cyclotomic(l, _fold(l, acc), self.den * o.den)

    __rmul__ = __mul__

    def mul_eps(self, k: int) -> "Cyclotomic":
        """Multiply by eps^k."""
        l = self.l
        k %= l
        if k == 0 or not any(self.nums):
            return self
        acc = [0] * l
        for i, a in enumerate(self.nums):
            acc[(i + k) % l] = a
        return Cyclotomic(l, _fold(l, acc), self.den)

    def __truediv__(self, other) -> "Cyclotomic":
        o = self._coerce(other)
        return self * invert(o, context="division")

    def __rtruediv__(self, other) -> "Cyclotomic":
        return self._coerce(other) * invert(self, context="division")

    def inverse(self) -> "Cyclotomic":
        return invert(self)

    def __pow__(self, k: int) -> "Cyclotomic":
        if k < 0:
            return invert(self, context="negative power") ** (-k)
        result = Cyclotomic.one(self.l)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


Scalar = Union[Cyclotomic, int, Fraction]


def reduce(l: int, poly: Union[Sequence, Mapping[int, object]]) -> Cyclotomic:
    """Canonical residue of a rational polynomial in eps.

    ``poly`` is either a coefficient sequence (index = exponent) or a mapping
    from (possibly negative) exponents to rational coefficients.
    """
    _check_level(l)
    items: Iterable = poly.items() if isinstance(poly, Mapping) else enumerate(poly)
    acc = [Fraction(0)] * l
    for k, c in items:
        acc[int(k) % l] += Fraction(c)
    den = 1
    for c in acc:
        den = den * c.denominator // gcd(den, c.denominator)
    return Cyclotomic(l, _fold(l, [int(c * den) for c in acc]), den)


def eps(l: int) -> Cyclotomic:
    """The generator eps of Q(zeta_l)."""
    return eps_power(l, 1)


@lru_cache(maxsize=4096)
def eps_power(l: int, k: int) -> Cyclotomic:
    """eps^k for any integer k (reduced mod l)."""
    F = _field(l)
    return Cyclotomic(l, list(F.red[k % l]))


def invert(x: Cyclotomic, context: str = "") -> Cyclotomic:
    """Multiplicative inverse, by solving the multiplication-by-x linear system."""
    if x.is_zero():
        where = f" (in {context})" if context else ""
        raise CyclotomicZeroDivisionError(f"inverse of zero in Q(zeta_{x.l}){where}")
    l = x.l
    d = _field(l).d
    # column j of M holds x * eps^j
    cols = [x.mul_eps(j) for j in range(d)]
    M = [[Fraction(cols[j].nums[i], cols[j].den) for j in range(d)] + [Fraction(int(i == 0))]
         for i in range(d)]
    for c in range(d):
        piv = next(r for r in range(c, d) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [v / pv for v in M[c]]
        for r in range(d):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return Cyclotomic.from_coeffs(l, [M[i][d] for i in range(d)])


@lru_cache(maxsize=None)
def _inv_eps_diff(l: int) -> Cyclotomic:
    return invert(eps(l) - eps_power(l, -1), context="1/(eps - eps^-1)")


def q_integer(l: int, a: int) -> Cyclotomic:
    """[a] = (eps^a - eps^-a) / (eps - eps^-1)."""
    return (eps_power(l, a) - eps_power(l, -a)) * _inv_eps_diff(l)


def q_factorial(l: int, a: int) -> Cyclotomic:
    """[a]! = [a][a-1]...[1]; zero once a >= l."""
    out = Cyclotomic.one(l)
    for k in range(1, a + 1):
        out = out * q_integer(l, k)
    return out


@lru_cache(maxsize=None)
def _gauss_std(m: int, k: int) -> tuple[int, ...]:
    # standard Gaussian binomial in q (nonnegative powers), coefficients low -> high
    if k < 0 or k > m:
        return (0,)
    if k == 0 or k == m:
        return (1,)
    a = _gauss_std(m - 1, k - 1)
    b = _gauss_std(m - 1, k)
    out = [0] * (k * (m - k) + 1)
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i + k] += v
    return tuple(out)


def gaussian_binomial_laurent(m: int, k: int) -> dict[int, int]:
    """Balanced Gaussian binomial [m choose k]_q as {exponent: integer coefficient}.

    Uses [a]_q = q^(1-a) (1 + q^2 + ... + q^(2a-2)), so the balanced binomial
    is q^(-k(m-k)) times the standard one evaluated at q^2.
    """
    shift = -k * (m - k)
    return {2 * i + shift: c for i, c in enumerate(_gauss_std(m, k)) if c}


def gaussian_multinomial(l: int, m: int, parts: Sequence[int]) -> Cyclotomic:
    """[m]! / prod [p]! for the given parts, evaluated at eps without division.

    The multinomial is assembled as a product of balanced Gaussian binomials
    with integer Laurent coefficients, then reduced into Q(zeta_l).
    """
    parts = list(parts)
    if any(p < 0 for p in parts) or sum(parts) != m:
        raise ValueError(f"parts {parts} do not sum to {m}")
    poly: dict[int, int] = {0: 1}
    rest = m
    for p in parts:
        g = gaussian_binomial_laurent(rest, p)
        nxt: dict[int, int] = {}
        for e1, c1 in poly.items():
            for e2, c2 in g.items():
                nxt[e1 + e2] = nxt.get(e1 + e2, 0) + c1 * c2
        poly = nxt
        rest -= p
    return reduce(l, poly)


def brace(z: Cyclotomic) -> Cyclotomic:
    """{z} = (z - z^-1) / (eps - eps^-1)."""
    zi = invert(z, context="brace {z}")
    return (z - zi) * _inv_eps_diff(z.l)


def discrete_log(x: Cyclotomic) -> int | None:
    """k in [0, l) with x = eps^k, or None when x is not a power of eps."""
    for k in range(x.l):
        if x == eps_power(x.l, k):
            return k
    return None


def parse_cyclotomic(text: Union[str, int], l: int | None = None) -> Cyclotomic:
    """Parse the canonical text form ``"l; c_0, ..., c_{d-1}"``.

    Bare integers are accepted when the level is supplied.
    """
    if isinstance(text, int) and not isinstance(text, bool):
        if l is None:
            raise ValueError("level required for integer scalars")
        return Cyclotomic.rational(l, text)
    if not isinstance(text, str):
        raise TypeError(f"cannot parse {text!r} as a cyclotomic number")
    if ";" not in text:
        if l is None:
            raise ValueError(f"missing level in {text!r}")
        return Cyclotomic.rational(l, Fraction(text.strip()))
    head, body = text.split(";", 1)
    lev = int(head.strip())
    if l is not None and lev != l:
        raise ValueError(f"level {lev} in {text!r} does not match expected {l}")
    coeffs = [Fraction(p.strip()) for p in body.split(",") if p.strip()]
    return Cyclotomic.from_coeffs(lev, coeffs)
