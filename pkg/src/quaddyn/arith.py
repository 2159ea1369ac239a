"""Exact rational arithmetic over the places of Q.

Rationals are ``fractions.Fraction`` (always in lowest terms, positive
denominator).  Logarithms of rational absolute values are carried exactly as
:class:`LogLinear` values ``sum q_p log p`` and only turned into floating
intervals at the very end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math
import re
from typing import Iterable, Mapping, Optional, Union

from sympy import factorint as _sympy_factorint, isprime

from .interval import DEFAULT_PREC, RealInterval


def factorint(n: int) -> dict[int, int]:
    # sympy may hand back flint integers when python-flint is present
    return {int(p): int(e) for p, e in _sympy_factorint(n).items()}

Rational = Fraction
RationalLike = Union[Fraction, int, str]

INFINITE_VALUATION = math.inf

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``[sign]digits[/digits]``; decimals and whitespace are rejected."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# places
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Place:
    """The archimedean place (``p is None``) or the p-adic place of a prime."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None and not (isinstance(self.p, int) and self.p >= 2 and isprime(self.p)):
            raise ValueError(f"{self.p!r} is not a prime")

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    @classmethod
    def parse(cls, text: str) -> "Place":
        if text in ("inf", "oo", "infinity"):
            return INF
        return cls(int(text))

    def __str__(self):
        return "inf" if self.p is None else str(self.p)


INF = Place(None)


def check_prime(p: int) -> int:
    if not (isinstance(p, int) and p >= 2 and isprime(p)):
        raise ValueError(f"{p!r} is not a prime")
    return p


def padic_valuation(q: RationalLike, p: int):
    """v_p(q); ``INFINITE_VALUATION`` for q = 0."""
    check_prime(p)
    q = as_rational(q)
    if q == 0:
        return INFINITE_VALUATION
    v = 0
    n, d = abs(q.numerator), q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def abs_value(q: RationalLike, v: Place) -> Fraction:
    """|q|_v as an exact rational (p^(-v_p(q)) at p, the usual |q| at infinity)."""
    q = as_rational(q)
    if v.is_archimedean:
        return abs(q)
    if q == 0:
        return Fraction(0)
    return Fraction(v.p) ** (-padic_valuation(q, v.p))


def support(*qs: RationalLike) -> list[int]:
    """Primes dividing some numerator or denominator of the arguments."""
    primes: set[int] = set()
    for q in qs:
        q = as_rational(q)
        for n in (abs(q.numerator), q.denominator):
            if n > 1:
                primes.update(factorint(n))
    return sorted(primes)


def denominator_primes(*qs: RationalLike) -> list[int]:
    primes: set[int] = set()
    for q in qs:
        d = as_rational(q).denominator
        if d > 1:
            primes.update(factorint(d))
    return sorted(primes)


# ---------------------------------------------------------------------------
# exact logarithms
# ---------------------------------------------------------------------------

def _frac_items(terms: Mapping[int, Fraction]) -> tuple:
    return tuple(sorted((p, Fraction(c)) for p, c in terms.items() if c != 0))


@dataclass(frozen=True)
class LogLinear:
    """``sum_p coeff_p * log p + arch`` with exact rational coefficients.

    ``arch`` is an interval remainder for quantities that are not rational
    combinations of logs of primes; it is [0, 0] for exact values.
    """

    terms: tuple = ()
    arch: RealInterval = field(default_factory=RealInterval.zero)

    @classmethod
    def of(cls, terms: Mapping[int, RationalLike] | None = None, arch: RealInterval | None = None) -> "LogLinear":
        items = {}
        for p, c in (terms or {}).items():
            check_prime(p)
            items[p] = as_rational(c) if not isinstance(c, Fraction) else c
        return cls(_frac_items(items), arch if arch is not None else RealInterval.zero())

    @classmethod
    def zero(cls) -> "LogLinear":
        return cls()

    @classmethod
    def log_int(cls, n: int) -> "LogLinear":
        if n <= 0:
            raise ValueError("log of a non-positive integer")
        return cls(_frac_items({p: Fraction(e) for p, e in factorint(n).items()}))

    @classmethod
    def log_rational(cls, q: RationalLike) -> "LogLinear":
        q = as_rational(q)
        if q <= 0:
            raise ValueError("log of a non-positive rational")
        return cls.log_int(q.numerator) - cls.log_int(q.denominator)

    @classmethod
    def log_prime(cls, p: int, coeff: RationalLike = 1) -> "LogLinear":
        return cls.of({p: coeff})

    # -- structure ------------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def coeff(self, p: int) -> Fraction:
        return self.coeffs.get(p, Fraction(0))

    @property
    def is_exact(self) -> bool:
        return self.arch.lo == 0 and self.arch.hi == 0

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.terms]

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if not isinstance(other, LogLinear):
            return NotImplemented
        acc = self.coeffs
        for p, c in other.terms:
            acc[p] = acc.get(p, Fraction(0)) + c
        arch = self.arch if other.is_exact else (other.arch if self.is_exact else self.arch + other.arch)
        return LogLinear(_frac_items(acc), arch)

    __radd__ = __add__

    def __neg__(self):
        return LogLinear(tuple((p, -c) for p, c in self.terms), -self.arch)

    def __sub__(self, other):
        if not isinstance(other, LogLinear):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, int):
            k = Fraction(k)
        if not isinstance(k, Fraction):
            return NotImplemented
        arch = self.arch if self.is_exact else self.arch * k
        return LogLinear(_frac_items({p: c * k for p, c in self.terms}), arch)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (Fraction(1) / Fraction(k))

    # -- evaluation and comparison --------------------------------------------
    def evaluate(self, prec: int = DEFAULT_PREC) -> RealInterval:
        total = self.arch.with_prec(max(prec, self.arch.prec))
        for p, c in self.terms:
            total = total + RealInterval.point(p, prec).log() * c
        return total

    def __float__(self):
        return self.evaluate(64).mid

    def sign(self, max_prec: int = 4096) -> Optional[int]:
        """-1, 0 or 1; ``None`` if an inexact remainder leaves it undecided.

        Exact values are always decidable: logs of distinct primes are
        linearly independent over Q, so a nonzero combination is nonzero.
        """
        if self.is_exact:
            if not self.terms:
                return 0
            if len(self.terms) == 1:
                return 1 if self.terms[0][1] > 0 else -1
        prec = DEFAULT_PREC
        while prec <= max_prec:
            val = self.evaluate(prec)
            if val.lo > 0:
                return 1
            if val.hi < 0:
                return -1
            if not self.is_exact and prec >= max(self.arch.prec, DEFAULT_PREC) * 2:
                return None
            prec *= 2
        if self.is_exact:
            raise ArithmeticError("precision cap reached deciding a nonzero exact sign")
        return None

    def compare(self, other: "LogLinear") -> Optional[int]:
        return (self - other).sign()

    def exact_eq(self, other: "LogLinear") -> bool:
        return self.is_exact and other.is_exact and self.terms == other.terms

    def __le__(self, other):
        s = self.compare(other)
        if s is None:
            raise ArithmeticError("comparison undecided at available precision")
        return s <= 0

    def __ge__(self, other):
        s = self.compare(other)
        if s is None:
            raise ArithmeticError("comparison undecided at available precision")
        return s >= 0

    def __lt__(self, other):
        return not self >= other

    def __gt__(self, other):
        return not self <= other

    def __repr__(self):
        if not self.terms and self.is_exact:
            return "LogLinear(0)"
        parts = [f"{c}*log({p})" for p, c in self.terms]
        if not self.is_exact:
            parts.append(repr(self.arch))
        return "LogLinear(" + " + ".join(parts) + ")"

    def to_json(self) -> dict:
        out = {"terms": {str(p): format_rational(c) for p, c in self.terms}}
        if not self.is_exact:
            out["arch"] = self.arch.to_json()
        out["value"] = float(self)
        return out


def log_abs(q: RationalLike, v: Place) -> LogLinear:
    """log|q|_v exactly (q nonzero)."""
    q = as_rational(q)
    if q == 0:
        raise ValueError("log|0|_v is undefined")
    if v.is_archimedean:
        return LogLinear.log_rational(abs(q))
    return LogLinear.log_prime(v.p, -padic_valuation(q, v.p))


def log_plus_abs(q: RationalLike, v: Place) -> LogLinear:
    q = as_rational(q)
    if q == 0:
        return LogLinear.zero()
    a = abs_value(q, v)
    return log_abs(q, v) if a > 1 else LogLinear.zero()


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------

def weil_height(q: RationalLike) -> LogLinear:
    """h(q) = log max(|num|, |den|)."""
    q = as_rational(q)
    return LogLinear.log_int(max(abs(q.numerator), q.denominator))


def weil_height2(c1: RationalLike, c2: RationalLike) -> LogLinear:
    """Height of the affine point (c1, c2): log max(d, |d c1|, |d c2|) for d = lcm of denominators."""
    c1, c2 = as_rational(c1), as_rational(c2)
    d = math.lcm(c1.denominator, c2.denominator)
    return LogLinear.log_int(max(d, abs(c1.numerator) * (d // c1.denominator),
                                 abs(c2.numerator) * (d // c2.denominator)))


def weil_height_interval(q: RationalLike, prec: int = DEFAULT_PREC) -> RealInterval:
    """h(q) as an interval, without factoring (for huge iterates)."""
    q = as_rational(q)
    return RealInterval.point(max(abs(q.numerator), q.denominator), prec).log()


def places_of(*qs: RationalLike) -> list[Place]:
    """Infinity followed by every prime in the support of the arguments."""
    return [INF] + [Place(p) for p in support(*qs)]


def local_ell(c1: Fraction, c2: Fraction, v: Place, L: Fraction) -> LogLinear:
    """log max(|c1|_v, |c2|_v, floor_v) with floor L at infinity, 16 at 2, 1 elsewhere."""
    floor = L if v.is_archimedean else (Fraction(16) if v.p == 2 else Fraction(1))
    return LogLinear.log_rational(max(abs_value(c1, v), abs_value(c2, v), floor))


def h_L(c1: RationalLike, c2: RationalLike, L: RationalLike) -> LogLinear:
    """Auxiliary height sum_v ell_v; exact.

    Checks h(c1, c2) <= h_L <= h(c1, c2) + log L + log 16 before returning.
    """
    c1, c2, L = as_rational(c1), as_rational(c2), as_rational(L)
    if L <= 1:
        raise ValueError("h_L needs L > 1")
    places = [INF] + [Place(p) for p in sorted(set(denominator_primes(c1, c2)) | {2})]
    total = LogLinear.zero()
    for v in places:
        total = total + local_ell(c1, c2, v, L)
    h = weil_height2(c1, c2)
    upper = h + LogLinear.log_rational(L) + LogLinear.log_int(16)
    if not (h <= total <= upper):
        raise ArithmeticError(f"h_L sandwich failed for ({c1}, {c2}, L={L})")
    return total
