"""Dense univariate polynomials over Q.

Arithmetic and gcd run on FLINT (``flint.fmpq_poly``), which uses modular
algorithms and keeps degree-256 preperiodicity polynomials cheap.  A small
pure-Python primitive-PRS gcd (:func:`prs_gcd`) is kept as an independent
route for cross-checking on modest degrees.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import json
import math
from typing import Iterable, Sequence

from flint import fmpq, fmpq_poly
from sympy import divisors

from .arith import RationalLike, as_rational, format_rational, parse_rational


def _to_fmpq(q: Fraction) -> fmpq:
    return fmpq(q.numerator, q.denominator)


def _to_fraction(q) -> Fraction:
    q = fmpq(q)
    return Fraction(int(q.p), int(q.q))


class PolyQ:
    """Immutable polynomial with exact rational coefficients, lowest degree first."""

    __slots__ = ("_p",)

    def __init__(self, coeffs: Iterable[RationalLike] | fmpq_poly = ()):
        if isinstance(coeffs, fmpq_poly):
            p = coeffs
        else:
            p = fmpq_poly([_to_fmpq(as_rational(c)) for c in coeffs])
        object.__setattr__(self, "_p", p)

    def __setattr__(self, name, value):
        raise AttributeError("PolyQ is immutable")

    # -- basic structure ------------------------------------------------------
    @classmethod
    def z(cls) -> "PolyQ":
        return cls([0, 1])

    @classmethod
    def const(cls, c: RationalLike) -> "PolyQ":
        return cls([c])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(_to_fraction(c) for c in self._p.coeffs())

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return self._p.degree()

    def is_zero(self) -> bool:
        return self._p.degree() < 0

    @property
    def leading(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return _to_fraction(self._p[self.degree])

    def monic(self) -> "PolyQ":
        if self.is_zero():
            raise ValueError("the zero polynomial has no monic form")
        return PolyQ(self._p / self._p[self.degree])

    def derivative(self) -> "PolyQ":
        return PolyQ(self._p.derivative())

    def __call__(self, x: RationalLike) -> Fraction:
        acc = Fraction(0)
        x = as_rational(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic -----------------------------------------------------------
    def _lift(self, other) -> fmpq_poly:
        if isinstance(other, PolyQ):
            return other._p
        return fmpq_poly([_to_fmpq(as_rational(other))])

    def __add__(self, other):
        return PolyQ(self._p + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PolyQ(self._p - self._lift(other))

    def __rsub__(self, other):
        return PolyQ(self._lift(other) - self._p)

    def __neg__(self):
        return PolyQ(-self._p)

    def __mul__(self, other):
        return PolyQ(self._p * self._lift(other))

    __rmul__ = __mul__

    def __divmod__(self, other: "PolyQ"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = divmod(self._p, other._p)
        return PolyQ(q), PolyQ(r)

    def __floordiv__(self, other: "PolyQ"):
        return divmod(self, other)[0]

    def __mod__(self, other: "PolyQ"):
        return divmod(self, other)[1]

    def compose(self, inner: "PolyQ") -> "PolyQ":
        return PolyQ(self._p(inner._p))

    def __eq__(self, other):
        if isinstance(other, PolyQ):
            return self._p == other._p
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyQ({[format_rational(c) for c in self.coeffs]})"

    # -- serialization --------------------------------------------------------
    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str] | str) -> "PolyQ":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(parse_rational(s) for s in data)

    def to_flint(self) -> fmpq_poly:
        return self._p


# ---------------------------------------------------------------------------
# dynamics polynomials
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _iterates(c: Fraction, n: int) -> tuple:
    z = fmpq_poly([0, 1])
    out = [z]
    cq = _to_fmpq(c)
    for _ in range(n):
        z = z * z + cq
        out.append(z)
    return tuple(out)


def iterate_poly(c: RationalLike, n: int) -> PolyQ:
    """f_c^n(z) for f_c(z) = z^2 + c; f_c^0 = z."""
    if not isinstance(n, int) or n < 0:
        raise ValueError("iteration count must be a non-negative integer")
    return PolyQ(_iterates(as_rational(c), n)[n])


def preper_poly(c: RationalLike, m: int, n: int) -> PolyQ:
    """f_c^(m+n) - f_c^m: roots have preperiod <= m and period dividing n."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("period length n must be >= 1")
    if not isinstance(m, int) or m < 0:
        raise ValueError("preperiod m must be >= 0")
    its = _iterates(as_rational(c), m + n)
    return PolyQ(its[m + n] - its[m])


# ---------------------------------------------------------------------------
# gcd and friends
# ---------------------------------------------------------------------------

def gcd_poly(a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic gcd over Q."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    g = PolyQ(a.to_flint().gcd(b.to_flint()))
    return g.monic()


def lcm_poly(a: PolyQ, b: PolyQ) -> PolyQ:
    if a.is_zero() or b.is_zero():
        return PolyQ()
    return (a * b // gcd_poly(a, b)).monic()


def squarefree_part(a: PolyQ) -> PolyQ:
    """Monic polynomial with the same roots as ``a``, each simple."""
    if a.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if a.degree == 0:
        return PolyQ([1])
    return (a // gcd_poly(a, a.derivative())).monic()


def rational_roots(a: PolyQ) -> set[Fraction]:
    """All rational roots, read off the linear factors of an exact factorization over Q."""
    if a.is_zero():
        raise ValueError("the zero polynomial has every number as a root")
    roots: set[Fraction] = set()
    _, factors = a.to_flint().factor()
    for f, _mult in factors:
        if f.degree() == 1:
            c0, c1 = _to_fraction(f[0]), _to_fraction(f[1])
            roots.add(-c0 / c1)
    return roots


def rational_roots_by_test(a: PolyQ) -> set[Fraction]:
    """Rational roots by the rational root test with exact verification.

    Independent of FLINT's factoring; used as a cross-check on small inputs.
    """
    if a.is_zero():
        raise ValueError("the zero polynomial has every number as a root")
    ints = _primitive_int_coeffs(a.coeffs)
    roots: set[Fraction] = set()
    # strip the root at 0
    k = 0
    while k < len(ints) and ints[k] == 0:
        k += 1
    if k > 0:
        roots.add(Fraction(0))
    ints = ints[k:]
    if len(ints) <= 1:
        return roots
    const, lead = abs(ints[0]), abs(ints[-1])
    at_one, at_minus_one = sum(ints), sum(a if i % 2 == 0 else -a for i, a in enumerate(ints))
    for num in divisors(const):
        for den in divisors(lead):
            if math.gcd(num, den) != 1:
                continue
            for p in (num, -num):
                # a root p/q forces (q - p) | P(1) and (q + p) | P(-1)
                if den != p and at_one % (den - p) != 0:
                    continue
                if den != -p and at_minus_one % (den + p) != 0:
                    continue
                if _homogeneous_eval(ints, p, den) == 0:
                    roots.add(Fraction(p, den))
    return roots


def _homogeneous_eval(ints: Sequence[int], p: int, q: int) -> int:
    """q^d * P(p/q) for integer coefficients, lowest degree first."""
    acc = 0
    qpow = 1
    for a in reversed(ints):
        acc = acc * p + a * qpow
        qpow *= q
    return acc


def _primitive_int_coeffs(coeffs: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g else ints


def prs_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic gcd by the primitive polynomial remainder sequence over Z.

    Pure Python and independent of FLINT; intended for cross-checks.
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    f = _primitive_int_coeffs(a.coeffs) if not a.is_zero() else []
    g = _primitive_int_coeffs(b.coeffs) if not b.is_zero() else []
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = _pseudo_rem(f, g)
        f, g = g, (_primitive_int_coeffs([Fraction(x) for x in r]) if r else [])
    return PolyQ(f).monic()


def _pseudo_rem(f: list[int], g: list[int]) -> list[int]:
    r = list(f)
    dg = len(g) - 1
    lg = g[-1]
    while len(r) - 1 >= dg and r:
        lr = r[-1]
        shift = len(r) - 1 - dg
        r = [x * lg for x in r]
        for i, gc in enumerate(g):
            r[i + shift] -= lr * gc
        while r and r[-1] == 0:
            r.pop()
    return r
