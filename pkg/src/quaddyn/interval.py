"""Outward-rounded real intervals backed by mpmath's interval context.

Every operation returns an enclosure of the exact result.  Precision is
carried per interval (bits of mantissa); binary operations run at the larger
of the two operand precisions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math
import threading

import mpmath
from mpmath.ctx_iv import MPIntervalContext

DEFAULT_PREC = 128

_lock = threading.Lock()


@lru_cache(maxsize=None)
def _ctx(prec: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def _to_iv(ctx: MPIntervalContext, value):
    if isinstance(value, RealInterval):
        return ctx.mpf([value.lo, value.hi])
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    if isinstance(value, int):
        return ctx.mpf(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return ctx.mpf(value)
    if isinstance(value, (str, mpmath.mpf)):
        return ctx.mpf(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an interval")


def _exact_mpf(raw) -> mpmath.mpf:
    # mpmath.mpf(raw) would round to the global 53-bit context
    obj = object.__new__(mpmath.mpf)
    obj._mpf_ = raw
    return obj


@dataclass(frozen=True)
class RealInterval:
    """Closed interval [lo, hi] with mpmath ``mpf`` endpoints."""

    lo: mpmath.mpf
    hi: mpmath.mpf
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    # -- construction -----------------------------------------------------
    @classmethod
    def _wrap(cls, iv, prec: int) -> "RealInterval":
        a, b = iv._mpi_
        return cls(_exact_mpf(a), _exact_mpf(b), prec)

    @classmethod
    def point(cls, value, prec: int = DEFAULT_PREC) -> "RealInterval":
        """Tightest enclosure of an exact int, Fraction, float or decimal string."""
        ctx = _ctx(prec)
        with _lock:
            return cls._wrap(_to_iv(ctx, value), prec)

    @classmethod
    def hull(cls, lo, hi, prec: int = DEFAULT_PREC) -> "RealInterval":
        a = cls.point(lo, prec)
        b = cls.point(hi, prec)
        return cls(min(a.lo, b.lo), max(a.hi, b.hi), prec)

    @classmethod
    def zero(cls, prec: int = DEFAULT_PREC) -> "RealInterval":
        return cls(mpmath.mpf(0), mpmath.mpf(0), prec)

    # -- helpers ------------------------------------------------------------
    def _binop(self, other, op):
        prec = max(self.prec, other.prec) if isinstance(other, RealInterval) else self.prec
        ctx = _ctx(prec)
        with _lock:
            res = op(ctx, _to_iv(ctx, self), _to_iv(ctx, other))
            return RealInterval._wrap(res, prec)

    def _unop(self, op):
        ctx = _ctx(self.prec)
        with _lock:
            return RealInterval._wrap(op(ctx, _to_iv(ctx, self)), self.prec)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        return self._binop(other, lambda c, a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda c, a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda c, a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda c, a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda c, a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda c, a, b: b / a)

    def __neg__(self):
        return RealInterval(-self.hi, -self.lo, self.prec)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers; use exp/log for real exponents")
        return self._unop(lambda c, a: a**k)

    def log(self) -> "RealInterval":
        if self.lo <= 0:
            raise ValueError("log of an interval that is not strictly positive")
        return self._unop(lambda c, a: c.log(a))

    def exp(self) -> "RealInterval":
        return self._unop(lambda c, a: c.exp(a))

    def sqrt(self) -> "RealInterval":
        if self.lo < 0:
            raise ValueError("sqrt of an interval with negative part")
        return self._unop(lambda c, a: c.sqrt(a))

    def max(self, other) -> "RealInterval":
        o = other if isinstance(other, RealInterval) else RealInterval.point(other, self.prec)
        return RealInterval(max(self.lo, o.lo), max(self.hi, o.hi), max(self.prec, o.prec))

    def widen(self, slack: float) -> "RealInterval":
        """Return [lo - slack, hi + slack] (rounded outward)."""
        return self + RealInterval.hull(-slack, slack, self.prec)

    def with_prec(self, prec: int) -> "RealInterval":
        return RealInterval(self.lo, self.hi, prec)

    # -- queries ------------------------------------------------------------
    @property
    def width(self) -> float:
        return float(self.hi - self.lo)

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def contains(self, value) -> bool:
        v = RealInterval.point(value, self.prec) if not isinstance(value, RealInterval) else value
        return self.lo <= v.lo and v.hi <= self.hi

    def overlaps(self, other) -> bool:
        o = other if isinstance(other, RealInterval) else RealInterval.point(other, self.prec)
        return self.lo <= o.hi and o.lo <= self.hi

    def certainly_lt(self, other) -> bool:
        o = other if isinstance(other, RealInterval) else RealInterval.point(other, self.prec)
        return self.hi < o.lo

    def certainly_le(self, other) -> bool:
        o = other if isinstance(other, RealInterval) else RealInterval.point(other, self.prec)
        return self.hi <= o.lo

    def certainly_gt(self, other) -> bool:
        o = other if isinstance(other, RealInterval) else RealInterval.point(other, self.prec)
        return self.lo > o.hi

    def certainly_ge(self, other) -> bool:
        o = other if isinstance(other, RealInterval) else RealInterval.point(other, self.prec)
        return self.lo >= o.hi

    def __repr__(self):
        return f"RealInterval([{mpmath.nstr(self.lo, 17)}, {mpmath.nstr(self.hi, 17)}], prec={self.prec})"

    def to_json(self) -> dict:
        # enough digits to reparse the same binary endpoints
        digits = int(self.prec * 0.30103) + 3
        return {"lo": mpmath.nstr(self.lo, digits, strip_zeros=False),
                "hi": mpmath.nstr(self.hi, digits, strip_zeros=False)}


def log_interval(value, prec: int = DEFAULT_PREC) -> RealInterval:
    """Enclosure of log(value) for a positive int or Fraction."""
    return RealInterval.point(value, prec).log()
