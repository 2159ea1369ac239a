"""The adelic energy pairing, canonical heights, and the bounds built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math
from typing import Optional, Union

import mpmath

from .arch import MCEstimate, arch_energy_mc, escape_rate_arch
from .arith import (INF, LogLinear, Place, RationalLike, abs_value, as_rational, denominator_primes,
                    format_rational, h_L, local_ell, weil_height, weil_height2, weil_height_interval)
from .constants import (ALPHA1, C1, C2, ALPHA2, FLOOR_2, KAPPA_2, KAPPA_INF, KAPPA_P, L_ARCH, WEAK_CONST,
                        WEAK_SLOPE, c_eps)
from .interval import DEFAULT_PREC, RealInterval
from .nonarch import EnergyBound, PadicEscape, escape_rate_padic, local_energy_padic
from .preper import orbit_status

SIGMAS = 3


# ---------------------------------------------------------------------------
# adelic pairing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sandwich:
    lower_thm: LogLinear
    upper_thm: LogLinear
    weak_lower: LogLinear

    def to_json(self) -> dict:
        return {"lower_thm": float(self.lower_thm), "upper_thm": float(self.upper_thm),
                "weak_lower": float(self.weak_lower)}


def sandwich_bounds(c1: Fraction, c2: Fraction) -> Sandwich:
    h = weil_height2(c1, c2)
    lower = h * ALPHA1 - LogLinear.of(arch=RealInterval.point(C1))
    upper = h * ALPHA2 + LogLinear.of(arch=RealInterval.point(C2))
    weak = (weil_height(c1 - c2) * WEAK_SLOPE) - WEAK_CONST
    return Sandwich(lower, upper, weak)


@dataclass(frozen=True)
class AdelicPairingReport:
    c1: Fraction
    c2: Fraction
    local: tuple[EnergyBound, ...]
    arch_part: MCEstimate
    sandwich: Sandwich

    @property
    def contributing_primes(self) -> list[int]:
        return [e.p for e in self.local]

    @property
    def finite_lower(self) -> LogLinear:
        return sum((e.lower for e in self.local), LogLinear.zero())

    @property
    def finite_upper(self) -> LogLinear:
        return sum((e.upper for e in self.local), LogLinear.zero())

    @property
    def finite_exact(self) -> bool:
        return all(e.exact for e in self.local)

    @property
    def finite_part(self) -> LogLinear:
        if not self.finite_exact:
            raise ValueError("finite part is only bracketed; use finite_lower/finite_upper")
        return self.finite_lower

    def total(self, sigmas: float = SIGMAS) -> RealInterval:
        """finite enclosure + arch mean, widened by ``sigmas`` standard errors."""
        a = self.arch_part
        lo = self.finite_lower.evaluate().lo + a.mean - sigmas * a.stderr
        hi = self.finite_upper.evaluate().hi + a.mean + sigmas * a.stderr
        return RealInterval.hull(lo, hi) if lo <= hi else RealInterval.hull(hi, lo)

    def checks(self, sigmas: float = SIGMAS) -> dict[str, bool]:
        """Sandwich checks; the lower ones use the lower end of the finite enclosure."""
        a = self.arch_part
        lo = float(self.finite_lower) + a.mean + sigmas * a.stderr
        hi = float(self.finite_upper) + a.mean - sigmas * a.stderr
        return {
            "lower_thm": lo >= float(self.sandwich.lower_thm),
            "upper_thm": hi <= float(self.sandwich.upper_thm),
            "weak_lower": lo >= float(self.sandwich.weak_lower),
        }

    def to_json(self) -> dict:
        t = self.total()
        return {
            "c1": format_rational(self.c1),
            "c2": format_rational(self.c2),
            "contributing_primes": self.contributing_primes,
            "local": [e.to_json() for e in self.local],
            "finite_exact": self.finite_exact,
            "finite_lower": self.finite_lower.to_json(),
            "finite_upper": self.finite_upper.to_json(),
            "arch_part": self.arch_part.to_json(),
            "total": {"lo": float(t.lo), "hi": float(t.hi)},
            "sandwich": self.sandwich.to_json(),
            "checks": self.checks(),
        }

    CSV_HEADER = ("c1", "c2", "h", "finite_lower", "finite_upper", "arch_mean", "arch_stderr",
                  "lower_thm", "upper_thm")

    def csv_row(self) -> list[str]:
        a = self.arch_part
        return [format_rational(self.c1), format_rational(self.c2),
                repr(float(weil_height2(self.c1, self.c2))),
                repr(float(self.finite_lower)), repr(float(self.finite_upper)),
                repr(a.mean), repr(a.stderr),
                repr(float(self.sandwich.lower_thm)), repr(float(self.sandwich.upper_thm))]


def adelic_pairing(c1: RationalLike, c2: RationalLike, mc_samples: int = 100_000, seed: int = 42,
                   workers: int = 1) -> AdelicPairingReport:
    """Sum of local energies over all places.

    Only primes dividing a denominator contribute: elsewhere both maps have
    good reduction and E_p = 0.
    """
    c1, c2 = as_rational(c1), as_rational(c2)
    local = tuple(local_energy_padic(c1, c2, p) for p in denominator_primes(c1, c2))
    arch = arch_energy_mc(c1, c2, samples=mc_samples, seed=seed, workers=workers)
    return AdelicPairingReport(c1, c2, local, arch, sandwich_bounds(c1, c2))


# ---------------------------------------------------------------------------
# canonical heights
# ---------------------------------------------------------------------------

def height_distortion_constant(c: RationalLike) -> LogLinear:
    """C_c = h(c) + log 2, a bound for |h(x^2 + c) - 2 h(x)| on Q."""
    return weil_height(as_rational(c)) + LogLinear.log_prime(2)


@dataclass(frozen=True)
class CanonicalHeightReport:
    c: Fraction
    x: Fraction
    value: RealInterval
    local_finite: dict = field(default_factory=dict)
    local_arch: Optional[RealInterval] = None
    iterations: int = 0
    preperiodic: bool = False
    global_enclosure: Optional[RealInterval] = None

    def to_json(self) -> dict:
        def pe(e: PadicEscape) -> dict:
            return {"lower": e.lower.to_json(), "upper": e.upper.to_json(), "escaped": e.escaped}

        return {
            "c": format_rational(self.c),
            "x": format_rational(self.x),
            "value": self.value.to_json(),
            "preperiodic": self.preperiodic,
            "local_finite": {str(p): pe(e) for p, e in self.local_finite.items()},
            "local_arch": self.local_arch.to_json() if self.local_arch is not None else None,
            "iterations": self.iterations,
            "global_enclosure": self.global_enclosure.to_json() if self.global_enclosure else None,
        }


def canonical_height_local(c: RationalLike, x: RationalLike, v: Place,
                           tol: float = 1e-12) -> Union[LogLinear, RealInterval]:
    """lambda_{c,v}(x): exact LogLinear at a prime when known, else an interval."""
    c, x = as_rational(c), as_rational(x)
    if orbit_status(c, x).preperiodic:
        # a finite orbit is bounded at every place
        return RealInterval.zero() if v.is_archimedean else LogLinear.zero()
    if v.is_archimedean:
        return escape_rate_arch(c, x, tol=tol).value
    e = escape_rate_padic(c, x, v.p)
    if e.exact:
        return e.value
    return RealInterval(e.lower.evaluate().lo, e.upper.evaluate().hi)


def global_height_enclosure(c: Fraction, x: Fraction, max_bits: int = 4096,
                            prec: int = DEFAULT_PREC) -> tuple[RealInterval, int]:
    """2^-n h(f^n x) +- 2^-n C_c for the largest n whose iterate stays below max_bits."""
    cc = height_distortion_constant(c).evaluate(prec)
    y, n = x, 0
    while True:
        nxt = y * y + c
        if max(abs(nxt.numerator), nxt.denominator).bit_length() > max_bits or n >= 64:
            break
        y, n = nxt, n + 1
    scale = Fraction(1, 2**n)
    h = weil_height_interval(y, prec)
    return RealInterval((h - cc).lo, (h + cc).hi, prec) * scale, n


def canonical_height(c: RationalLike, x: RationalLike, precision: float = 1e-6) -> CanonicalHeightReport:
    """h_hat_c(x) as a sum of local escape rates.

    Finite places are exact (primes dividing the denominators of c or x);
    the archimedean term is an interval of width <= ``precision``.  The
    global estimate 2^-n h(f^n x) +- 2^-n C_c is attached as a cross-check;
    doubling the digits at every step keeps n small.
    """
    if not precision > 0:
        raise ValueError("precision must be positive")
    c, x = as_rational(c), as_rational(x)
    orbit = orbit_status(c, x)
    if orbit.preperiodic:
        zero = RealInterval.zero()
        return CanonicalHeightReport(c, x, zero, {}, zero, orbit.steps, True, zero)

    finite = {p: escape_rate_padic(c, x, p) for p in denominator_primes(c, x)}
    arch = escape_rate_arch(c, x, tol=precision / 2).value
    lo = sum((e.lower for e in finite.values()), LogLinear.zero()).evaluate().lo + arch.lo
    hi = sum((e.upper for e in finite.values()), LogLinear.zero()).evaluate().hi + arch.hi
    glob, n = global_height_enclosure(c, x)
    value = RealInterval(max(lo, mpmath.mpf(0)), hi)
    return CanonicalHeightReport(c, x, value, finite, arch, n, False, glob)


# ---------------------------------------------------------------------------
# helpful places
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaceInfo:
    place: Place
    ell: LogLinear
    kappa: int
    large: bool
    good: bool

    @property
    def category(self) -> str:
        if not self.large:
            return "bounded"
        return "good" if self.good else "close"


@dataclass(frozen=True)
class HelpfulPlacesReport:
    c1: Fraction
    c2: Fraction
    L: Fraction
    places: tuple[PlaceInfo, ...]
    h_L: LogLinear

    def _of(self, cat: str) -> list[PlaceInfo]:
        return [p for p in self.places if p.category == cat]

    @property
    def good(self) -> list[PlaceInfo]:
        return self._of("good")

    @property
    def close(self) -> list[PlaceInfo]:
        return self._of("close")

    @property
    def bounded(self) -> list[PlaceInfo]:
        return self._of("bounded")

    def _sum(self, infos) -> LogLinear:
        return sum((p.ell for p in infos), LogLinear.zero())

    @property
    def not_close_margin(self) -> LogLinear:
        """sum over non-close places of ell - (h_L/3 - (2/3) log 6)."""
        rhs = self.h_L / 3 - LogLinear.log_int(6) * Fraction(2, 3)
        return self._sum(self.good + self.bounded) - rhs

    @property
    def good_margin(self) -> LogLinear:
        """sum over good places of ell - (h_L/3 - log(16 * 6^(2/3) * L))."""
        rhs = (self.h_L / 3 - LogLinear.log_int(16) - LogLinear.log_int(6) * Fraction(2, 3)
               - LogLinear.log_rational(self.L))
        return self._sum(self.good) - rhs

    def lemma_holds(self) -> tuple[bool, bool]:
        return self.not_close_margin >= LogLinear.zero(), self.good_margin >= LogLinear.zero()

    def to_json(self) -> dict:
        def info(p: PlaceInfo) -> dict:
            return {"place": str(p.place), "ell": p.ell.to_json(), "kappa": p.kappa}

        a, b = self.lemma_holds()
        return {
            "c1": format_rational(self.c1), "c2": format_rational(self.c2),
            "L": format_rational(self.L), "h_L": self.h_L.to_json(),
            "good": [info(p) for p in self.good],
            "close": [info(p) for p in self.close],
            "bounded": [info(p) for p in self.bounded],
            "not_close_margin": float(self.not_close_margin),
            "good_margin": float(self.good_margin),
            "lemma_holds": [a, b],
        }


def _kappa_floor(v: Place, L: Fraction) -> tuple[int, Fraction]:
    if v.is_archimedean:
        return KAPPA_INF, L
    if v.p == 2:
        return KAPPA_2, Fraction(FLOOR_2)
    return KAPPA_P, Fraction(1)


def helpful_places_report(c1: RationalLike, c2: RationalLike, L: RationalLike = L_ARCH) -> HelpfulPlacesReport:
    """Split the places into good, close and bounded and check both lemma bounds.

    Places outside {inf, 2} and the denominator primes are bounded with
    ell_v = 0 and are left out.
    """
    c1, c2, L = as_rational(c1), as_rational(c2), as_rational(L)
    if c1 == c2:
        raise ValueError("c1 == c2: |c1 - c2|_v is zero at every place")
    if L < L_ARCH:
        raise ValueError(f"L must be >= {L_ARCH}")
    places = [INF] + [Place(p) for p in sorted(set(denominator_primes(c1, c2)) | {2})]
    infos = []
    for v in places:
        kappa, floor = _kappa_floor(v, L)
        m = max(abs_value(c1, v), abs_value(c2, v), floor)
        large = m > floor
        # |c1 - c2| > kappa e^(-ell/2)  <=>  |c1 - c2|^2 * e^ell > kappa^2
        good = large and abs_value(c1 - c2, v) ** 2 * m > kappa**2
        infos.append(PlaceInfo(v, local_ell(c1, c2, v, L), kappa, large, good))
    report = HelpfulPlacesReport(c1, c2, L, tuple(infos), h_L(c1, c2, L))
    a, b = report.lemma_holds()
    if not (a and b):
        raise ArithmeticError(f"helpful-places inequality fails for ({c1}, {c2}, L={L})")
    return report


# ---------------------------------------------------------------------------
# equidistribution upper bounds
# ---------------------------------------------------------------------------

def equidist_upper(c1: RationalLike, c2: RationalLike, N: int, eps: float) -> float:
    """(eps + C(eps)/(N - 1)) (h(c1, c2) + 1), rounded up."""
    if not isinstance(N, int) or N < 2:
        raise ValueError("N must be an integer >= 2")
    eps_q = Fraction(eps)
    if not 0 < eps_q < 1:
        raise ValueError("eps must lie in (0, 1)")
    h = weil_height2(as_rational(c1), as_rational(c2)).evaluate()
    val = (c_eps(eps_q) / (N - 1) + RealInterval.point(eps_q)) * (h + 1)
    return float(val.hi)


def prop_upper_with_L(c1: RationalLike, c2: RationalLike, N: int, delta: float, L: RationalLike) -> float:
    """4 (delta + 3 log(1/delta) / (2 (N - 1))) h_L(c1, c2), rounded up."""
    if not isinstance(N, int) or N < 2:
        raise ValueError("N must be an integer >= 2")
    d = Fraction(delta)
    if not 0 < d < Fraction(1, 4):
        raise ValueError("delta must lie in (0, 1/4)")
    L = as_rational(L)
    if L < 27:
        raise ValueError("L must be >= 27")
    hl = h_L(as_rational(c1), as_rational(c2), L).evaluate()
    log_inv = RealInterval.point(1 / d).log()
    val = (log_inv * 3 / (2 * (N - 1)) + RealInterval.point(d)) * hl * 4
    return float(val.hi)


def pairing_positive(report: AdelicPairingReport, sigmas: float = SIGMAS) -> bool:
    """Is the pairing consistent with the uniform lower bound 10^-75?

    Uses the lower end of the finite enclosure, like the other lower checks.
    """
    a = report.arch_part
    return float(report.finite_lower) + a.mean + sigmas * a.stderr >= 1e-75 and not math.isnan(a.mean)
