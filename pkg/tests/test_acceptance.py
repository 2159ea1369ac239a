"""End-to-end acceptance checks, one test per criterion.

Each test prints a single "[criterion k] PASS/FAIL ..." line to the terminal
and then asserts, so a plain ``pytest tests/test_acceptance.py`` shows a
summary even when output capture is on.
"""

from fractions import Fraction as F
import json
import math
import time

import numpy as np
import pytest

from quaddyn.arch import arch_energy_mc, distortion_battery, energy_circle_oracle
from quaddyn.arith import LogLinear, weil_height2
from quaddyn.audit import b_certificate, delta_certificate
from quaddyn.cli import main
from quaddyn.nonarch import local_energy_padic
from quaddyn.pairing import adelic_pairing, canonical_height, equidist_upper, pairing_positive
from quaddyn.preper import common_preper, minimal_bound

from _oracles import (check_sandwich, grid_points, padic_pair_corpus, padic_places, pair_with,
                      random_rational, s_form_lookup)

HYDE = (F(-21, 16), F(-29, 16))
MC = 100_000


def report(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {k}] {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def sandwich_corpus():
    """100 random pairs with h(c1, c2) <= 20 and their pairing reports."""
    rng = np.random.default_rng(2024)
    bound = int(math.exp(10))
    pairs = []
    while len(pairs) < 100:
        # mix scales so small and large heights both appear
        b = int(rng.choice([10, 10**2, 10**3, bound]))
        c1, c2 = random_rational(rng, b), random_rational(rng, b)
        if c1 != c2 and float(weil_height2(c1, c2)) <= 20:
            pairs.append((c1, c2))
    t0 = time.perf_counter()
    reports = [adelic_pairing(c1, c2, mc_samples=MC) for c1, c2 in pairs]
    return reports, time.perf_counter() - t0


def test_criterion_1_small_example(capsys):
    t0 = time.perf_counter()
    code = main(["common-preper", "--c1", "0", "--c2", "-1", "--bound", "8"])
    d = json.loads(capsys.readouterr().out)
    dt = time.perf_counter() - t0
    ok = (code == 0 and set(d["rational_points"]) == {"0", "1", "-1"}
          and d["distinct_common_count"] == 3 and d["include_infinity_total"] == 4 and dt < 60)
    report(capsys, 1, ok, f"points={sorted(d['rational_points'])} total={d['include_infinity_total']} in {dt:.2f}s")


def test_criterion_2_hyde_count(capsys):
    t0 = time.perf_counter()
    rep = common_preper(*HYDE, 8)
    dt = time.perf_counter() - t0
    ok = rep.include_infinity_total >= 27 and dt < 600
    report(capsys, 2, ok, f"include_infinity_total={rep.include_infinity_total} at bound 8 in {dt:.2f}s")


def test_criterion_3_padic_sandwich(capsys):
    checked = 0
    for c1, c2 in padic_pair_corpus(1000, 3):
        for p in padic_places(c1, c2):
            check_sandwich(c1, c2, p)
            checked += 1
    report(capsys, 3, True, f"1000 pairs, {checked} local energies exact-sandwiched and symmetric")


def test_criterion_4_p2_grid(capsys):
    pts = grid_points(200)
    mismatches = []
    for R, T in pts:
        for a, b in (pair_with(R, T), pair_with(R, T)[::-1]):
            got = local_energy_padic(a, b, 2)
            want = s_form_lookup(R, T)
            if want is not None and not (got.exact and got.lower.exact_eq(LogLinear.log_prime(2, want))):
                mismatches.append((R, T))
    ok = len(pts) == 200 and not mismatches
    report(capsys, 4, ok, f"{len(pts)} grid points, mismatches={mismatches[:5]}")


def test_criterion_5_pairing_sandwich(capsys, sandwich_corpus):
    reports, dt = sandwich_corpus
    bad = [(str(r.c1), str(r.c2)) for r in reports
           if not (r.checks()["lower_thm"] and r.checks()["upper_thm"])]
    ok = not bad and dt < 600
    report(capsys, 5, ok, f"{len(reports)} pairs, failures={bad[:5]}, {dt:.1f}s")


def test_criterion_6_weak_lower(capsys, sandwich_corpus):
    reports, _ = sandwich_corpus
    bad = [(str(r.c1), str(r.c2)) for r in reports if not r.checks()["weak_lower"]]
    report(capsys, 6, not bad, f"{len(reports)} pairs, failures={bad[:5]}")


def test_criterion_7_oracle_agreement(capsys):
    rows, ok = [], True
    for c in (-2, -1, 2, 5):
        est = arch_energy_mc(0, c, samples=MC)
        ref = energy_circle_oracle(c)
        dev = abs(est.mean - float(ref.mid))
        ok &= dev <= 3 * est.stderr
        rows.append(f"c={c}: {dev / est.stderr:.2f}sigma")
    report(capsys, 7, ok, ", ".join(rows))


def test_criterion_8_canonical_height(capsys):
    zero = canonical_height(-1, 0).value
    log2 = canonical_height(0, 2, precision=1e-10).value
    rng = np.random.default_rng(8)
    bound = int(math.exp(10))
    worst = 0.0
    for _ in range(100):
        c, x = random_rational(rng, bound), random_rational(rng, bound)
        a, b = canonical_height(c, x).value, canonical_height(c, x * x + c).value
        worst = max(worst, float(abs(b.hi - 2 * a.lo)), float(abs(2 * a.hi - b.lo)))
    ok = zero.lo == 0 and zero.hi == 0 and abs(float(log2.mid) - math.log(2)) < 1e-9 and worst <= 2e-6
    report(capsys, 8, ok, f"h(-1,0)=[{zero.lo},{zero.hi}], |h(0,2)-log2|={abs(float(log2.mid) - math.log(2)):.1e}, "
                          f"worst functional eq. gap {worst:.1e}")


def test_criterion_9_distortion_battery(capsys):
    claims = distortion_battery(26, samples=10_000, seed=0, levels=(1,))
    disks = [c for c in claims if c.claim.startswith("mu_c(D_1")]
    escape = [c for c in claims if "outside D_1" in c.claim]
    ok = len(disks) == 2 and len(escape) == 1 and all(c.passed for c in disks + escape)
    ok &= escape[0].bound == pytest.approx(math.log(26) / 4)
    detail = ", ".join(f"{c.observed:.4f}" for c in disks)
    report(capsys, 9, ok, f"disk measures {detail}; min escape outside {escape[0].observed:.4f} "
                          f">= {escape[0].bound:.4f}")


def test_criterion_10_certificates(capsys):
    rows, ok = [], True
    for make in (delta_certificate, b_certificate):
        t0 = time.perf_counter()
        cert = make()
        dt = time.perf_counter() - t0
        ok &= cert.verified and dt < 1
        rows.append(f"{cert.name}: verified={cert.verified} in {dt * 1000:.0f}ms")
    report(capsys, 10, ok, "; ".join(rows))


def test_criterion_11_equidist_upper(capsys):
    N = common_preper(*HYDE, minimal_bound(*HYDE, 27)).include_infinity_total
    rep = adelic_pairing(*HYDE, mc_samples=MC)
    a = rep.arch_part
    value = float(rep.finite_upper) + a.mean - 3 * a.stderr
    bounds = {eps: equidist_upper(*HYDE, N, eps) for eps in (0.1, 0.25, 0.5)}
    ok = N == 27 and all(value <= b for b in bounds.values())
    report(capsys, 11, ok, f"N={N}, pairing<={value:.4f}, bounds " +
           ", ".join(f"{e}:{b:.2f}" for e, b in bounds.items()))


def test_criterion_12_headline_coverage(capsys):
    rng = np.random.default_rng(12)
    pairs = set()
    while len(pairs) < 20:
        c1 = random_rational(rng, 1000)
        pairs.add((c1, c1 + F(1, 10**6)))
    bad = [str(c1) for c1, c2 in sorted(pairs) if not pairing_positive(adelic_pairing(c1, c2, mc_samples=10_000))]
    certs = delta_certificate().verified and b_certificate().verified
    ok = not bad and certs
    report(capsys, 12, ok, f"20 close pairs positive (failures={bad}); certificates={certs}; "
                           "the global statement itself is not certified")
