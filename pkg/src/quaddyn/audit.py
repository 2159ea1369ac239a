"""Interval certificates for the two effective constant chains.

Each step is an outward-rounded interval comparison; a certificate is
verified only if every recorded step holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .constants import ALPHA1, C1, DELTA, c_eps
from .interval import RealInterval

F = Fraction
AUDIT_PREC = 256


@dataclass(frozen=True)
class Step:
    description: str
    value: RealInterval
    holds: bool = True

    def to_json(self) -> dict:
        return {"step": self.description, "value": self.value.to_json(), "holds": self.holds}


@dataclass
class Certificate:
    name: str
    claimed: RealInterval
    verified: bool = True
    trace: list[Step] = field(default_factory=list)

    def note(self, description: str, value: RealInterval) -> RealInterval:
        self.trace.append(Step(description, value))
        return value

    def check(self, description: str, value: RealInterval, ok: bool) -> bool:
        self.trace.append(Step(description, value, ok))
        self.verified = self.verified and ok
        return ok

    def step(self, description: str) -> Step:
        for s in self.trace:
            if s.description == description:
                return s
        raise KeyError(description)

    def to_json(self) -> dict:
        return {"name": self.name, "claimed": self.claimed.to_json(), "verified": self.verified,
                "trace": [s.to_json() for s in self.trace]}


def _pt(x, prec: int) -> RealInterval:
    return RealInterval.point(x, prec)


def delta_certificate(prec: int = AUDIT_PREC) -> Certificate:
    """Certify that delta = 10^-75 bounds the pairing from below for close parameters."""
    P = lambda x: _pt(x, prec)  # noqa: E731
    cert = Certificate("delta", P(DELTA))

    H = cert.note("H = 2001^(100/99)", (P(2001).log() * P(F(100, 99))).exp())
    M = cert.note("M = 9 H^2", H**2 * 9)
    s2 = cert.note("s^2 = 117 * 2^6 * 9^3 * H^8 / 100", H**8 * P(F(117 * 2**6 * 9**3, 100)))
    s = s2.sqrt()

    # parameters closer than 1/H at most archimedean places
    weak = cert.note("log(2001/2000)/16", P(F(2001, 2000)).log() / 16)
    cert.check("log(2001/2000)/16 > 3.12e-5", weak, weak.certainly_gt(P(F(312, 10**7))))
    cert.check("3.12e-5 > 1e-75", P(F(312, 10**7)), P(F(312, 10**7)).certainly_gt(P(DELTA)))

    # some place with |c1 - c2| > 1/H
    cert.check("M >= 1000", M, M.certainly_ge(P(1000)))
    cert.check("s >= M^2", s, s2.certainly_ge(M**4))
    big = cert.note("(1/64) log M", M.log() / 64)
    cert.check("(1/64) log M > 0.14", big, big.certainly_gt(P(F(14, 100))))
    small = cert.note("100^2 / (2^18 9^6 117^2 H^18)", P(100**2) / (H**18 * P(2**18 * 9**6 * 117**2)))
    stated = P(F(14, 100)).max(small) / 100
    cert.check("(1/100) max{0.14, E_small} > 1e-75", stated, stated.certainly_gt(P(DELTA)))
    # the case split needs the smaller branch; it clears 1e-75 as well
    worst = RealInterval(min(small.lo, P(F(14, 100)).lo), min(small.hi, P(F(14, 100)).hi), prec) / 100
    cert.check("(1/100) min{0.14, E_small} > 1e-75", worst, worst.certainly_gt(P(DELTA)))
    return cert


def b_certificate(prec: int = AUDIT_PREC) -> Certificate:
    """Certify N < 281857 at large height and N < 10^82 overall."""
    P = lambda x: _pt(x, prec)  # noqa: E731
    cert = Certificate("B", P(10**82))
    a, c1 = ALPHA1, C1

    # large-height branch, eps = alpha1 / 2
    C_half = cert.note("C(alpha1/2) = 40 log(50/alpha1)", c_eps(a / 2, prec))
    cert.check("C(alpha1/2) < 367", C_half, C_half.certainly_lt(P(367)))
    thresh = 4 * (c1 + a) / a
    cert.check("threshold 4(C1+alpha1)/alpha1 - 1 <= 139", P(thresh - 1), thresh - 1 <= 139)
    n_large = cert.note("4 C(alpha1/2) / alpha1", C_half * P(4 / a))
    cert.check("4 * 367 / alpha1 = 281856 bounds N - 1", P(4 * 367 / a),
               n_large.certainly_lt(P(4 * 367 / a)) and 4 * 367 / a == 281856)
    cert.check("N < 281857 < 10^6", n_large + 1, (n_large + 1).certainly_lt(P(281857)) and 281857 < 10**6)

    # bounded-height branch, eps = alpha1 delta / (8 (C1 + alpha1))
    ratio = (c1 + a) / a
    cert.check("(C1+alpha1)/alpha1 <= 35", P(ratio), ratio <= 35)
    eps = a * DELTA / (8 * (c1 + a))
    exact_bound = cert.note(
        "320 (C1+alpha1)/(alpha1 delta) log(200 (C1+alpha1)/(alpha1 delta))",
        P(320 * ratio / DELTA) * P(200 * ratio / DELTA).log())
    via_c_eps = cert.note("C(eps) / eps", c_eps(eps, prec) / P(eps))
    cert.check("C(eps)/eps encloses the closed form",
               via_c_eps, not (via_c_eps.certainly_lt(exact_bound) or via_c_eps.certainly_gt(exact_bound)))
    relaxed = cert.note("320*35/delta log(200*35/delta)", P(320 * 35 / DELTA) * P(200 * 35 / DELTA).log())
    cert.check("closed form <= 320*35 relaxation", exact_bound, exact_bound.certainly_le(relaxed))
    final = cert.note("75*320*35*10^75 log(200*35*10)", P(75 * 320 * 35 * 10**75) * P(200 * 35 * 10).log())
    cert.check("relaxation <= 75*320*35*10^75 log 70000", relaxed, relaxed.certainly_le(final))
    cert.check("N <= 1 + bound < 10^82", final + 1, (final + 1).certainly_lt(P(10**82)))
    return cert
