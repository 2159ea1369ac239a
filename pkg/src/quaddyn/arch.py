"""Archimedean dynamics of f_c(z) = z^2 + c.

Escape rates use an explicit bound on the neglected tail: once
|w| >= R(c) = max(2, |c|) + 1 the orbit grows monotonically and

    |lambda_c(w) - log|w|| <= -log(1 - |c| / |w|^2),

so 2^-n (log|f^n z| +/- that) brackets lambda_c(z).  ``escape_rate_arch``
runs the orbit in complex interval arithmetic, raising the precision until
rounding is accounted for, and returns a true enclosure.  The vectorized
``escape_bounds`` iterates in double precision for Monte Carlo work and does
not track rounding in the orbit; near J_c, where errors grow like |f'|, it
can be off.  Equilibrium samples come from random backward orbits started at
the repelling fixed point.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from fractions import Fraction
import cmath
import csv
import math
from typing import Optional, Sequence

import numpy as np

from .constants import L_ARCH
from .interval import RealInterval, _ctx, _lock, _to_iv

DEFAULT_MAX_ITER = 1024
DEFAULT_BURN_IN = 64
# float64 slack on final bound comparisons
NUMERIC_SLACK = 1e-9
# beyond this modulus the tail term is below 1e-180 for every |c| we handle
_HUGE = 1e100
# precision ladder for the interval orbit
_START_PREC = 64
_MAX_PREC = 8192


def _as_complex(x, name: str) -> complex:
    z = complex(x)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return z


def escape_radius(c: complex) -> float:
    return max(2.0, abs(c)) + 1.0


@dataclass(frozen=True)
class EscapeValue:
    value: RealInterval
    escaped: bool
    iterations_used: int


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    one_sided: tuple = (0.0, 0.0)
    one_sided_stderr: tuple = (0.0, 0.0)

    def to_json(self) -> dict:
        return asdict(self)


def escape_bounds(c: complex, z: np.ndarray, tol: float = 1e-12, max_iter: int = DEFAULT_MAX_ITER):
    """Vectorized double-precision bracket of lambda_c on an array of points.

    Only the tail is bracketed; rounding along the orbit is not, so use
    ``escape_rate_arch`` when an enclosure is needed.
    Returns ``(lo, hi, escaped, iterations)`` arrays.  Points that have not
    left the escape disk after ``max_iter`` steps get
    [0, 2^-max_iter log(R + 1)].
    """
    c = _as_complex(c, "c")
    z = np.asarray(z, dtype=np.complex128).ravel().copy()
    if not np.all(np.isfinite(z)):
        raise ValueError("points must be finite")
    R = escape_radius(c)
    ac = abs(c)
    npts = z.size
    lo = np.zeros(npts)
    hi = np.full(npts, math.ldexp(math.log(R + 1.0), -max_iter))
    escaped = np.zeros(npts, dtype=bool)
    iters = np.full(npts, max_iter, dtype=np.int64)

    active = np.arange(npts)
    w = z
    for n in range(max_iter + 1):
        if active.size == 0:
            break
        a = np.abs(w)
        out = a >= R
        if np.any(out):
            ao = a[out]
            with np.errstate(divide="ignore"):
                tail = -np.log1p(-ac / (ao * ao))
            logs = np.log(ao)
            scale = math.ldexp(1.0, -n)
            width = 2.0 * scale * tail
            done = (width <= tol) | (ao > _HUGE) | (n == max_iter)
            if np.any(done):
                idx = active[out][done]
                lg, tl = logs[done], tail[done]
                slack = 4 * np.finfo(float).eps * (np.abs(lg) + tl) + 1e-300
                lo[idx] = np.maximum(0.0, scale * (lg - tl - slack))
                hi[idx] = scale * (lg + tl + slack)
                escaped[idx] = True
                iters[idx] = n
                keep = np.ones(active.size, dtype=bool)
                keep[np.flatnonzero(out)[done]] = False
                active, w = active[keep], w[keep]
        if n < max_iter and active.size:
            w = w * w + c
    return lo, hi, escaped, iters


def _parts(x, name: str) -> tuple:
    """Exact real and imaginary parts; rationals stay rational."""
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return x, 0
    z = _as_complex(x, name)
    return z.real, z.imag


def _interval_orbit(c_parts, z_parts, R: float, tol: float, max_iter: int, prec: int):
    """One pass at fixed precision; ``None`` when rounding swamps the orbit."""
    ctx = _ctx(prec)
    cr, ci = (_to_iv(ctx, v) for v in c_parts)
    wr, wi = (_to_iv(ctx, v) for v in z_parts)
    R2 = ctx.mpf(R) ** 2
    abs_c = ctx.sqrt(cr ** 2 + ci ** 2).b
    for n in range(max_iter + 1):
        m2 = wr ** 2 + wi ** 2
        lo2, hi2 = m2.a, m2.b
        scale = ctx.ldexp(ctx.mpf(1), -n)
        if lo2 >= R2:
            tail = -ctx.log(1 - abs_c / lo2)
            lam_lo = (ctx.log(lo2) / 2 - tail) * scale
            lam_hi = (ctx.log(hi2) / 2 + tail) * scale
            if (lam_hi.b - lam_lo.a) <= tol or n == max_iter:
                lo = ctx.mpf(0) if lam_lo.a < 0 else lam_lo.a
                return RealInterval._wrap(ctx.mpf([lo, lam_hi.b]), prec), True, n
        elif hi2 - lo2 > 1e-6 * (1 + hi2):
            # box too loose to decide escape: the max-principle bound may suffice
            cap = (ctx.log(ctx.sqrt(hi2 + R2) + 1) * scale).b
            if cap <= tol:
                return RealInterval._wrap(ctx.mpf([0, cap]), prec), False, n
            return None
        if n < max_iter:
            wr, wi = wr ** 2 - wi ** 2 + cr, 2 * wr * wi + ci
    cap = (ctx.log(ctx.sqrt(hi2 + R2) + 1) * ctx.ldexp(ctx.mpf(1), -max_iter)).b
    return RealInterval._wrap(ctx.mpf([0, cap]), prec), False, max_iter


def escape_rate_arch(c, z, tol: float = 1e-12, max_iter: int = DEFAULT_MAX_ITER) -> EscapeValue:
    """Certified interval enclosure of the escape rate lambda_c(z).

    Ints and Fractions are used exactly.  The orbit runs in interval
    arithmetic; precision doubles from 64 bits whenever rounding blurs the
    orbit before the width goal is met.  Orbits that never certifiably escape get
    [0, 2^-n log(sqrt(|w|^2 + R^2) + 1)], which bounds lambda from above
    by the maximum principle.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    cp, zp = _parts(c, "c"), _parts(z, "z")
    R = escape_radius(_as_complex(c, "c"))
    prec = _START_PREC
    with _lock:
        while True:
            res = _interval_orbit(cp, zp, R, tol, max_iter, prec)
            if res is not None:
                value, escaped, n = res
                return EscapeValue(value, escaped and value.lo > 0, n)
            if prec >= _MAX_PREC:
                break
            prec *= 2
    # rounding wins even at the ceiling: fall back to the bound after zero steps
    cap = RealInterval.point(max(abs(_as_complex(z, "z")), R) + 1).log()
    return EscapeValue(RealInterval.hull(0, cap.hi), False, 0)


def escape_rate_values(c, z: np.ndarray, max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    """Midpoint estimates of lambda_c, for Monte Carlo use."""
    lo, hi, _, _ = escape_bounds(c, z, tol=1e-10, max_iter=max_iter)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# equilibrium measure
# ---------------------------------------------------------------------------

def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def _split(count: int, workers: int) -> list[int]:
    base, extra = divmod(count, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _backward_chains(c: complex, count: int, burn_in: int, rng: np.random.Generator) -> np.ndarray:
    beta = (1 + cmath.sqrt(1 - 4 * c)) / 2
    z = np.full(count, beta, dtype=np.complex128)
    for _ in range(burn_in):
        signs = rng.integers(0, 2, size=count) * 2 - 1
        z = signs * np.sqrt(z - c)
    return z


def sample_equilibrium(c, count: int, burn_in: int = DEFAULT_BURN_IN, seed: int = 0,
                       workers: int = 1, stream: int = 0) -> np.ndarray:
    """Approximate samples of mu_c from independent random backward orbits.

    Each sample is the endpoint of its own ``burn_in``-step chain started at
    the fixed point (1 + sqrt(1 - 4c)) / 2, which lies in J_c.
    """
    c = _as_complex(c, "c")
    if count < 1:
        raise ValueError("count must be >= 1")
    if burn_in < 16:
        raise ValueError("burn_in must be >= 16")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    sizes = _split(count, workers)

    def run(i):
        return _backward_chains(c, sizes[i], burn_in, _stream(seed, stream, i))

    if workers == 1:
        parts = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(workers)))
    return np.concatenate(parts)


def write_samples_csv(points: np.ndarray, stream) -> None:
    """Write sample points to a text stream as CSV with columns re,im."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["re", "im"])
    for z in np.asarray(points, dtype=np.complex128):
        writer.writerow([repr(float(z.real)), repr(float(z.imag))])


def _one_side(c_eval: complex, c_measure: complex, samples: int, burn_in: int, seed: int,
              workers: int, stream: int):
    pts = sample_equilibrium(c_measure, samples, burn_in, seed, workers, stream)
    sizes = _split(samples, workers)
    bounds = np.cumsum([0] + sizes)
    # per-worker partial sums merged in worker order
    sums, sqs = [], []
    for i in range(workers):
        vals = escape_rate_values(c_eval, pts[bounds[i]:bounds[i + 1]])
        sums.append(float(np.sum(vals)))
        sqs.append(float(np.sum(vals * vals)))
    total, total_sq = math.fsum(sums), math.fsum(sqs)
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / max(samples - 1, 1)
    return mean, math.sqrt(var / samples)


def arch_energy_mc(c1, c2, samples: int = 100_000, seed: int = 42, workers: int = 1,
                   burn_in: int = DEFAULT_BURN_IN) -> MCEstimate:
    """Monte Carlo estimate of E_inf(c1, c2), symmetrized over both orders.

    Averages lambda_{c1} over mu_{c2}-samples and lambda_{c2} over
    mu_{c1}-samples.  The diagonal returns exactly 0.
    """
    c1 = _as_complex(c1, "c1")
    c2 = _as_complex(c2, "c2")
    if samples < 100:
        raise ValueError("samples must be >= 100")
    if c1 == c2:
        return MCEstimate(0.0, 0.0, samples, seed)
    m1, s1 = _one_side(c1, c2, samples, burn_in, seed, workers, stream=1)
    m2, s2 = _one_side(c2, c1, samples, burn_in, seed, workers, stream=2)
    return MCEstimate(0.5 * (m1 + m2), 0.5 * math.hypot(s1, s2), samples, seed, (m1, m2), (s1, s2))


def energy_circle_oracle(c, nodes: int = 8192, tol: float = 1e-12) -> RealInterval:
    """E_inf(0, c) as the average of lambda_c over the unit circle.

    Trapezoid rule on ``nodes`` equally spaced angles.  The returned interval
    covers the lambda enclosures plus a quadrature term taken as the gap to
    the rule on half the nodes (a heuristic, not a proof: lambda_c is only
    Hoelder continuous).
    """
    c = _as_complex(c, "c")
    if nodes < 64:
        raise ValueError("nodes must be >= 64")
    theta = 2 * np.pi * np.arange(nodes) / nodes
    lo, hi, _, _ = escape_bounds(c, np.exp(1j * theta), tol=tol)
    mid = 0.5 * (lo + hi)
    full = float(np.mean(mid))
    half = float(np.mean(mid[::2]))
    quad_err = abs(full - half)
    lo_avg, hi_avg = float(np.mean(lo)), float(np.mean(hi))
    return RealInterval.hull(max(0.0, lo_avg - quad_err - NUMERIC_SLACK), hi_avg + quad_err + NUMERIC_SLACK)


# ---------------------------------------------------------------------------
# closed-form bounds
# ---------------------------------------------------------------------------

def _log_plus(x: float) -> float:
    return math.log(x) if x > 1 else 0.0


@dataclass(frozen=True)
class ArchBounds:
    lower: float
    upper: float
    strong_lower: Optional[float]





def arch_bounds_thm(c1, c2) -> ArchBounds:
    """Two-sided bound on E_inf with L = 1000, C = log(2L)/16, C' = log 8."""
    c1 = _as_complex(c1, "c1")
    c2 = _as_complex(c2, "c2")
    d = abs(c1 - c2)
    m = max(abs(c1), abs(c2))
    lower = _log_plus(d) / 16 - math.log(2 * L_ARCH) / 16
    upper = _log_plus(m) / 2 + math.log(8)
    strong = None
    if m >= L_ARCH and d >= 3 / math.sqrt(m):
        strong = math.log(m) / 64
    return ArchBounds(lower, upper, strong)


def arch_epsilon_bound(c, r: float, L: float) -> tuple[float, float]:
    """(radius, bound): lambda_c <= r log max(|c|, L) within the radius of K_c."""
    c = _as_complex(c, "c")
    if not 0 < r < 0.25:
        raise ValueError("r must lie in (0, 1/4)")
    if L < 27:
        raise ValueError("L must be >= 27")
    m = max(abs(c), float(L))
    return m ** (-3 * math.log(1 / r)), r * math.log(m)


def prop92_lower(c1, c2, M: float, s: float) -> float:
    """|c1 - c2|^2 / (32 s^4) - (117/100) M^3 / s^6 for close bounded parameters."""
    c1 = _as_complex(c1, "c1")
    c2 = _as_complex(c2, "c2")
    if M < L_ARCH:
        raise ValueError(f"M must be >= {L_ARCH}")
    if s < M * M:
        raise ValueError("s must be >= M^2")
    if abs(c1) > M or abs(c2) > M:
        raise ValueError("parameters must satisfy |c_i| <= M")
    return abs(c1 - c2) ** 2 / (32 * s**4) - 1.17 * M**3 / s**6


# ---------------------------------------------------------------------------
# distortion battery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Claim:
    claim: str
    observed: float
    bound: float
    sigma: float
    passed: bool

    def to_json(self) -> dict:
        return {"claim": self.claim, "observed": self.observed, "bound": self.bound,
                "sigma": self.sigma, "pass": self.passed}


def zero_preimages(c: complex, n: int) -> np.ndarray:
    """The 2^n solutions of f_c^n(z) = 0."""
    pts = np.array([0j])
    for _ in range(n):
        r = np.sqrt(pts - c)
        pts = np.concatenate([r, -r])
    return pts


def distortion_battery(c, samples: int = 10_000, seed: int = 0, levels: Sequence[int] = (1, 2, 3)) -> list[Claim]:
    """Statistical checks of the escape-disk and shrinking-rate estimates for |c| >= 25."""
    c = _as_complex(c, "c")
    ac = abs(c)
    if ac < 25:
        raise ValueError(f"distortion battery needs |c| >= 25, got |c| = {ac:g}")
    rng = _stream(seed, 99)
    julia = sample_equilibrium(c, samples, seed=seed, stream=7)
    logc = math.log(ac)
    claims: list[Claim] = []

    lam_c = escape_rate_arch(c, c).value
    claims.append(Claim("lambda_c(c) >= log|c| - log 2", float(lam_c.lo), logc - math.log(2), 0.0,
                        float(lam_c.lo) >= logc - math.log(2) - NUMERIC_SLACK))
    claims.append(Claim("lambda_c(c) <= log|c| + log 2", float(lam_c.hi), logc + math.log(2), 0.0,
                        float(lam_c.hi) <= logc + math.log(2) + NUMERIC_SLACK))

    for n in levels:
        eps = abs(2 * c) ** (-(n - 1) / 2)
        centers = zero_preimages(c, n)
        dist = np.abs(julia[:, None] - centers[None, :])
        p = 2.0 ** -n
        sigma = math.sqrt(p * (1 - p) / samples)
        for k, ctr in enumerate(centers):
            frac = float(np.mean(dist[:, k] < eps))
            claims.append(Claim(f"mu_c(D_{n}[{k}] center {ctr:.6g}, radius {eps:.3g}) = 2^-{n}",
                                frac, p, sigma, abs(frac - p) <= 3 * sigma))

        # escape lower bound at random points outside D_n(c)
        radius = 2 * math.sqrt(ac) + 2
        cand = radius * np.sqrt(rng.random(4 * samples)) * np.exp(2j * np.pi * rng.random(4 * samples))
        outside = np.all(np.abs(cand[:, None] - centers[None, :]) >= eps, axis=1)
        pts = np.concatenate([cand[outside][:samples], [0j]])
        lo, _, _, _ = escape_bounds(c, pts)
        bound = logc / 2 ** (n + 1)
        worst = float(np.min(lo))
        claims.append(Claim(f"lambda_c >= 2^-{n + 1} log|c| outside D_{n}(c)", worst, bound, 0.0,
                            worst >= bound - NUMERIC_SLACK))

        # shrinking-rate upper bound near the Julia set
        delta = 1 / (5 * 3**n * ac ** ((n - 2) / 2))
        offs = delta * np.sqrt(rng.random(samples)) * np.exp(2j * np.pi * rng.random(samples)) * (1 - 1e-9)
        _, hi, _, _ = escape_bounds(c, julia + offs)
        ubound = logc / 2 ** (n - 1)
        worst_hi = float(np.max(hi))
        claims.append(Claim(f"lambda_c <= 2^-{n - 1} log|c| within {delta:.3g} of J_c", worst_hi, ubound, 0.0,
                            worst_hi <= ubound + NUMERIC_SLACK))
    return claims
