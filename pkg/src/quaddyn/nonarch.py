"""p-adic dynamics of f_c(z) = z^2 + c for rational c.

Every quantity here is determined by valuations, so results are exact
:class:`LogLinear` multiples of log p.  Local energies follow the case
analysis for odd p and for p = 2; where that analysis only brackets the
energy (it cannot tell whether branch disks overlap) an honest interval is
returned with ``exact=False``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import math
from typing import Optional

from .arith import (LogLinear, RationalLike, as_rational, check_prime, format_rational,
                    padic_valuation)
from .interval import RealInterval

F = Fraction


class JuliaKind(str, Enum):
    GOOD_REDUCTION = "GoodReduction"
    POTENTIAL_GOOD_REDUCTION = "PotentialGoodReduction"
    CANTOR_ON_CIRCLE = "CantorOnCircle"


@dataclass(frozen=True)
class JuliaClassification:
    p: int
    kind: JuliaKind
    circle_log_radius: Optional[LogLinear] = None


def _neg_val(q: Fraction, p: int) -> int:
    """log_p |q|_p, i.e. -v_p(q); q must be nonzero."""
    return -padic_valuation(q, p)


def julia_classify(c: RationalLike, p: int) -> JuliaClassification:
    c = as_rational(c)
    check_prime(p)
    e = _neg_val(c, p) if c != 0 else -1
    if e <= 0:
        return JuliaClassification(p, JuliaKind.GOOD_REDUCTION)
    if p == 2 and e <= 2:
        return JuliaClassification(p, JuliaKind.POTENTIAL_GOOD_REDUCTION)
    return JuliaClassification(p, JuliaKind.CANTOR_ON_CIRCLE, LogLinear.log_prime(p, F(e, 2)))


# ---------------------------------------------------------------------------
# escape rates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PadicEscape:
    lower: LogLinear
    upper: LogLinear
    escaped: bool
    iterations_used: int

    @property
    def exact(self) -> bool:
        return self.lower.exact_eq(self.upper)

    @property
    def value(self) -> LogLinear:
        if not self.exact:
            raise ValueError("escape rate only bracketed; use lower/upper")
        return self.lower


class _PrecisionExhausted(Exception):
    pass


def _unit_mod(q: Fraction, p: int, v: int, digits: int) -> int:
    """Unit part of q = p^v * u, reduced mod p^digits."""
    mod = p**digits
    u = q / F(p) ** v
    return (u.numerator * pow(u.denominator, -1, mod)) % mod


def _padic_orbit(c: Fraction, x: Fraction, p: int, cap: int, digits: int):
    """Follow |f^n(x)|_p with truncated p-adic arithmetic.

    Returns (n, e) for the first n <= cap where e = log_p|f^n x|_p exceeds
    max(0, log_p|c|_p / 2), or (n, None) if no escape was certified within
    n steps (n = cap, or fewer if precision ran out).
    """
    vc = padic_valuation(c, p) if c != 0 else None
    ec = -vc if vc is not None else None
    threshold = max(F(0), F(ec, 2)) if ec is not None else F(0)
    b = _unit_mod(c, p, vc, digits) if vc is not None else 0

    # y = p^v * a with a a unit known mod p^r; y_exact marks y == 0 exactly
    if x == 0:
        v, a, r, y_zero = 0, 0, digits, True
    else:
        v = padic_valuation(x, p)
        a, r, y_zero = _unit_mod(x, p, v, digits), digits, False

    for n in range(cap + 1):
        if not y_zero and -v > threshold:
            return n, -v
        if n == cap:
            break
        # y <- y^2 + c
        if y_zero:
            if vc is None:
                return n, None  # 0 is fixed for z^2
            v, a, r, y_zero = vc, b, digits, False
            continue
        v2, a2 = 2 * v, (a * a) % p**r
        if vc is None:
            v, a = v2, a2
        elif v2 < vc:
            shift = vc - v2
            a = (a2 + (b * p**shift if shift < r else 0)) % p**r
            v = v2
        elif v2 > vc:
            r = min(digits, r + v2 - vc)
            a = (b + a2 * p ** (v2 - vc)) % p**r
            v = vc
        else:
            s = (a2 + b) % p**r
            if s == 0:
                raise _PrecisionExhausted(n + 1)
            t = 0
            while s % p == 0:
                s //= p
                t += 1
            v, a, r = vc + t, s, r - t
    return cap, None


def escape_rate_padic(c: RationalLike, x: RationalLike, p: int, cap: int = 1024) -> PadicEscape:
    """p-adic escape rate lambda_{c,p}(x), exact whenever the orbit escapes.

    Escape at step n means |f^n x|_p > max(1, |c|_p^(1/2)), after which
    |f^(n+k) x| = |f^n x|^(2^k) and lambda = 2^-n log|f^n x|_p.  Otherwise
    lambda <= 2^-n (1/2) log+|c|_p for the number n of steps checked.
    """
    c, x = as_rational(c), as_rational(x)
    check_prime(p)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    ec = _neg_val(c, p) if c != 0 else -1
    ex = _neg_val(x, p) if x != 0 else -1
    if ec <= 0 and ex <= 0:
        # good reduction and x in the closed unit disk
        return PadicEscape(LogLinear.zero(), LogLinear.zero(), False, 0)

    digits = 64 + cap * max(1, ec)
    try:
        n, e = _padic_orbit(c, x, p, cap, digits)
    except _PrecisionExhausted as exc:
        n, e = exc.args[0], None
    if e is not None:
        val = LogLinear.log_prime(p, F(e, 2**n))
        return PadicEscape(val, val, True, n)
    upper = LogLinear.log_prime(p, F(max(ec, 0), 2 ** (n + 1)))
    return PadicEscape(LogLinear.zero(), upper, False, n)


# ---------------------------------------------------------------------------
# local energies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyBound:
    """Enclosure [lower, upper] of a local energy at the place ``p``."""

    p: Optional[int]
    lower: LogLinear
    upper: LogLinear
    exact: bool
    case_label: str

    def to_json(self) -> dict:
        return {
            "place": "inf" if self.p is None else str(self.p),
            "lower_terms": {str(q): format_rational(k) for q, k in self.lower.terms},
            "upper_terms": {str(q): format_rational(k) for q, k in self.upper.terms},
            "exact": self.exact,
            "case_label": self.case_label,
            "lower": float(self.lower),
            "upper": float(self.upper),
        }


def _exact(p: int, coeff: Fraction, label: str) -> EnergyBound:
    v = LogLinear.log_prime(p, coeff)
    return EnergyBound(p, v, v, True, label)


def _bracket(p: int, lo: Fraction, hi: Fraction, label: str) -> EnergyBound:
    return EnergyBound(p, LogLinear.log_prime(p, lo), LogLinear.log_prime(p, hi), False, label)


def local_energy_padic(c1: RationalLike, c2: RationalLike, p: int) -> EnergyBound:
    """E_p(c1, c2) = integral of lambda_{c1,p} against mu_{c2,p}.

    Dispatches on the three valuations of c1, c2 and c1 - c2.  All
    coefficients below are multiples of log p; R = log_p r with
    r = |c1|_p = |c2|_p, and S (T at p = 2) = log_p |c1 - c2|_p.
    """
    c1, c2 = as_rational(c1), as_rational(c2)
    check_prime(p)
    if c1 == c2:
        return _exact(p, F(0), "diagonal")
    e1 = _neg_val(c1, p) if c1 != 0 else -math.inf
    e2 = _neg_val(c2, p) if c2 != 0 else -math.inf
    if e1 <= 0 and e2 <= 0:
        return _exact(p, F(0), "good-reduction")
    if e1 != e2 or e1 <= 0 or e2 <= 0:
        return _exact(p, F(max(e1, e2, 0), 2), "unequal-norms")

    R = F(e1)
    S = F(_neg_val(c1 - c2, p))
    if p != 2:
        half = R / 2
        if S > half:
            return _exact(p, S / 2, "odd:case1 s>r^1/2")
        if S == half:
            return _bracket(p, R / 8, R / 2, "odd:case2 s=r^1/2")
        if S > 0:
            return _exact(p, R / 8 + S / 4, "odd:case3 1<s<r^1/2")
        if S == 0:
            return _bracket(p, R / 16, R / 2, "odd:case4 s=1")
        if S > -half:
            return _exact(p, (R + S) / 8, "odd:case5 r^-1/2<s<1")
        return _bracket(p, F(0), R / 2, "odd:close s<=r^-1/2")

    T = S
    if R <= 4:
        return _bracket(p, max(T, F(0)) / 16, R / 2, "2:r<=16 equal norms")
    edge = R / 2 - 1  # log_2 of r^(1/2)/2
    if T > edge:
        return _exact(p, T / 2, "2:case1-2 t>r^1/2/2")
    if T == edge:
        return _bracket(p, (R - 3) / 8, R / 2, "2:case3 t=r^1/2/2")
    if T > 0:
        return _exact(p, (T + edge) / 4, "2:case4 1<t<r^1/2/2")
    if T == 0:
        return _bracket(p, (R - 3) / 16, R / 2, "2:case5 t=1")
    if T > -edge:
        return _exact(p, (T + R - 2) / 8, "2:case6 2/r^1/2<t<1")
    return _bracket(p, F(0), R / 2, "2:close t<=2/r^1/2")


def padic_epsilon_bound(c: RationalLike, p: int, r: RationalLike) -> tuple[LogLinear, LogLinear]:
    """(log of neighborhood radius, escape-rate bound) near the p-adic Julia set.

    The log radius is -log(1/r) * log m, a product of logarithms, so it is
    carried in the interval remainder of the returned LogLinear.
    """
    c, r = as_rational(c), as_rational(r)
    check_prime(p)
    if p == 2:
        if not 0 < r < F(1, 4):
            raise ValueError("p = 2 needs 0 < r < 1/4")
        e = max(_neg_val(c, p) if c != 0 else 0, 4)
    else:
        if not 0 < r < 1:
            raise ValueError("odd p needs 0 < r < 1")
        e = _neg_val(c, p) if c != 0 else 0
        if e <= 0:
            # lambda vanishes on the closed unit disk
            return LogLinear.zero(), LogLinear.zero()
    log_m = RealInterval.point(p).log() * e
    log_radius = -(RealInterval.point(1 / r).log() * log_m)
    return LogLinear.of(arch=log_radius), LogLinear.log_prime(p, r * e)


class Disjointness(str, Enum):
    DISJOINT = "Disjoint"
    NOT_DETERMINED = "NotDetermined"


def filled_julia_disjoint_at_p(c1: RationalLike, c2: RationalLike, p: int) -> Disjointness:
    """Disjoint when the filled Julia sets sit at different absolute values.

    For |c|_p <= 1 the filled Julia set is the closed unit disk; otherwise it
    lies on the circle |z| = |c|_p^(1/2) > 1 (also in the potential good
    reduction range at p = 2, where it is a closed unit disk about b with
    |b| = |c|^(1/2) > 1).
    """
    c1, c2 = as_rational(c1), as_rational(c2)
    check_prime(p)
    e1 = max(_neg_val(c1, p), 0) if c1 != 0 else 0
    e2 = max(_neg_val(c2, p), 0) if c2 != 0 else 0
    return Disjointness.DISJOINT if e1 != e2 else Disjointness.NOT_DETERMINED
