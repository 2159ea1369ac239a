"""Preperiodic points of z^2 + c over Q and common preperiodic points of two maps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .arith import RationalLike, as_rational, format_rational
from .interval import RealInterval
from .polyq import PolyQ, gcd_poly, lcm_poly, preper_poly, rational_roots, squarefree_part

MAX_BOUND = 10
ORACLE_MAX_BOUND = 4
HEIGHT_MARGIN = 3


def _naive_height(q: Fraction) -> int:
    return max(abs(q.numerator), q.denominator)


@dataclass(frozen=True)
class OrbitStatus:
    preperiodic: bool
    steps: int
    last: Fraction


def orbit_status(c: RationalLike, x: RationalLike, max_steps: int = 100_000) -> OrbitStatus:
    """Follow the exact orbit of x until it repeats or its height is too large.

    Once h(f^n x) > h(c) + 3, the canonical height of f^n x is positive,
    since |h_c_hat - h| <= h(c) + log 2 on Q; so x is not preperiodic.
    """
    c, y = as_rational(c), as_rational(x)
    limit = RealInterval.point(_naive_height(c)) * RealInterval.point(HEIGHT_MARGIN).exp()
    seen = {y}
    for n in range(1, max_steps + 1):
        if RealInterval.point(_naive_height(y)).certainly_gt(limit):
            return OrbitStatus(False, n - 1, y)
        y = y * y + c
        if y in seen:
            return OrbitStatus(True, n, y)
        seen.add(y)
    raise RuntimeError(f"orbit of {x} under z^2 + {c} undecided after {max_steps} steps")


def is_preperiodic(c: RationalLike, x: RationalLike) -> bool:
    return orbit_status(c, x).preperiodic


@dataclass(frozen=True)
class PreperReport:
    c1: Fraction
    c2: Fraction
    bound: int
    distinct_common_count: int
    rational_points: frozenset
    accumulator: PolyQ

    @property
    def include_infinity_total(self) -> int:
        return self.distinct_common_count + 1

    def to_json(self, with_polynomial: bool = False) -> dict:
        out = {
            "c1": format_rational(self.c1),
            "c2": format_rational(self.c2),
            "bound": self.bound,
            "distinct_common_count": self.distinct_common_count,
            "rational_points": [format_rational(q) for q in sorted(self.rational_points)],
            "include_infinity_total": self.include_infinity_total,
        }
        if with_polynomial:
            out["accumulator"] = self.accumulator.to_json()
        return out


def _check_pair(c1: Fraction, c2: Fraction, bound: int, cap: int) -> None:
    if c1 == c2:
        raise ValueError("c1 == c2: intersection is the full preperiodic set")
    if not isinstance(bound, int) or not 1 <= bound <= cap:
        raise ValueError(f"bound must be an integer in [1, {cap}]")


def common_preper(c1: RationalLike, c2: RationalLike, bound: int) -> PreperReport:
    """Common preperiodic points with preperiod + period <= bound for both maps.

    A point of preperiod m and exact period k with m + k <= B is a root of
    f^(B-k+k) - f^(B-k), so the B polynomials f^B - f^(B-n), n = 1..B, have
    the same roots as the whole family f^(m+n) - f^m with m + n <= B.  The
    accumulator is the lcm of squarefree parts of all cross gcds.
    """
    c1, c2 = as_rational(c1), as_rational(c2)
    _check_pair(c1, c2, bound, MAX_BOUND)
    fam1 = [preper_poly(c1, bound - n, n) for n in range(1, bound + 1)]
    fam2 = [preper_poly(c2, bound - n, n) for n in range(1, bound + 1)]
    acc = PolyQ([1])
    for a in fam1:
        for b in fam2:
            g = gcd_poly(a, b)
            if g.degree > 0:
                acc = lcm_poly(acc, squarefree_part(g))
    acc = squarefree_part(acc)
    return PreperReport(c1, c2, bound, acc.degree, frozenset(rational_roots(acc)), acc)


def _numeric_roots(poly: PolyQ) -> np.ndarray:
    # simple roots only, so numpy's eigenvalue roots are accurate
    coeffs = [float(q) for q in reversed(squarefree_part(poly).coeffs)]
    return np.roots(coeffs)


def _cluster(points: np.ndarray, tol: float) -> list[complex]:
    reps: list[complex] = []
    for z in points:
        if all(abs(z - w) > tol for w in reps):
            reps.append(complex(z))
    return reps


def common_preper_oracle(c1: RationalLike, c2: RationalLike, bound: int, tol: float = 1e-8) -> int:
    """Count common preperiodic points by matching numerical roots."""
    c1, c2 = as_rational(c1), as_rational(c2)
    _check_pair(c1, c2, bound, ORACLE_MAX_BOUND)
    pts = []
    for c in (c1, c2):
        roots = [_numeric_roots(preper_poly(c, m, n))
                 for m in range(bound) for n in range(1, bound - m + 1)]
        pts.append(_cluster(np.concatenate(roots), tol))
    return sum(1 for z in pts[0] if any(abs(z - w) <= tol for w in pts[1]))


def preper_count_by_bound(c1: RationalLike, c2: RationalLike, max_bound: int) -> list[int]:
    return [common_preper(c1, c2, b).distinct_common_count for b in range(1, max_bound + 1)]


def minimal_bound(c1: RationalLike, c2: RationalLike, target_total: int,
                  max_bound: int = 8) -> Optional[int]:
    """Smallest bound whose total (with infinity) reaches target_total."""
    for b in range(1, max_bound + 1):
        if common_preper(c1, c2, b).include_infinity_total >= target_total:
            return b
    return None

