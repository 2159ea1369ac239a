"""Explicit constants of the pairing bounds, kept in one place.

Rationals are stored exactly; logarithmic constants as :class:`LogLinear`.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import LogLinear
from .interval import DEFAULT_PREC, RealInterval

F = Fraction

ALPHA1 = F(1, 192)
C1 = F(3, 17)
ALPHA2 = F(1, 2)
C2 = F(5, 2)
L_ARCH = 1000
DELTA = F(1, 10**75)
C_EPS_FACTOR = 40
C_EPS_NUMERATOR = 25

# weak lower bound: (1/16) h(c1 - c2) - (1/16) log 2000
WEAK_SLOPE = F(1, 16)
WEAK_CONST = LogLinear.log_int(2000) * F(1, 16)

# helpful places
KAPPA_INF = 3
KAPPA_2 = 2
KAPPA_P = 1
FLOOR_2 = 16


def c_eps(eps: Fraction | float, prec: int = DEFAULT_PREC) -> RealInterval:
    """C(eps) = 40 log(25/eps)."""
    e = F(eps)
    if not 0 < e < 1:
        raise ValueError("eps must lie in (0, 1)")
    return RealInterval.point(C_EPS_NUMERATOR / e, prec).log() * C_EPS_FACTOR


def constants_table() -> dict[str, Fraction | int | LogLinear | str]:
    return {
        "alpha1": ALPHA1,
        "C1": C1,
        "alpha2": ALPHA2,
        "C2": C2,
        "L_arch": L_ARCH,
        "delta": DELTA,
        "C_eps": "40*log(25/eps)",
        "C_eps_factor": C_EPS_FACTOR,
        "C_eps_numerator": C_EPS_NUMERATOR,
        "weak_slope": WEAK_SLOPE,
        "weak_const": WEAK_CONST,
        "kappa_inf": KAPPA_INF,
        "kappa_2": KAPPA_2,
        "kappa_p": KAPPA_P,
        "floor_2": FLOOR_2,
    }
