from fractions import Fraction as F
import json

from hypothesis import given, settings, strategies as st
import pytest

from quaddyn.polyq import (PolyQ, gcd_poly, iterate_poly, lcm_poly, preper_poly, prs_gcd,
                           rational_roots, rational_roots_by_test, squarefree_part)

from _oracles import rationals

Z = PolyQ.z()


def P(*coeffs):
    return PolyQ(list(coeffs))


# -- iteration --------------------------------------------------------------------

def test_iterate_examples():
    assert iterate_poly(-1, 2) == P(0, 0, -2, 0, 1)
    assert iterate_poly(0, 3) == P(*([0] * 8 + [1]))
    c = F(-21, 16)
    assert iterate_poly(c, 1) == P(c, 0, 1)
    assert iterate_poly(c, 0) == Z


def test_iterate_rejects_negative():
    with pytest.raises(ValueError):
        iterate_poly(0, -1)


@settings(max_examples=30)
@given(rationals(50, 50), st.integers(0, 6))
def test_iterate_degree(c, n):
    p = iterate_poly(c, n)
    assert p.degree == 2**n
    assert p.leading == 1


# -- preperiodicity polynomials -------------------------------------------------------

def test_preper_examples():
    assert preper_poly(-1, 0, 2) == P(0, -1, -2, 0, 1)
    assert preper_poly(0, 0, 1) == P(0, -1, 1)
    assert preper_poly(-1, 1, 2)(1) == 0


@pytest.mark.parametrize("m,n", [(0, 0), (-1, 1)])
def test_preper_rejects(m, n):
    with pytest.raises(ValueError):
        preper_poly(0, m, n)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([F(0), F(-1), F(-2), F(1, 4), F(-21, 16), F(-29, 16), F(-3, 4)]),
       st.integers(0, 3), st.integers(1, 3))
def test_preper_rational_roots_satisfy_orbit(c, m, n):
    poly = preper_poly(c, m, n)
    assert poly.degree == 2 ** (m + n)
    for x in rational_roots(poly):
        orbit = [x]
        for _ in range(m + n):
            orbit.append(orbit[-1] ** 2 + c)
        assert orbit[m + n] == orbit[m]


# -- gcd, lcm, squarefree part ------------------------------------------------------

def test_gcd_examples():
    assert gcd_poly(P(-1, 0, 1), P(0, -1, 1)) == P(-1, 1)
    p = P(3, 0, 6)
    assert gcd_poly(p, p) == P(F(1, 2), 0, 1)
    g = gcd_poly(preper_poly(0, 0, 1), preper_poly(-1, 0, 2))
    assert g(0) == 0


def test_gcd_zero_zero():
    with pytest.raises(ValueError):
        gcd_poly(PolyQ(), PolyQ())


small_polys = st.lists(st.integers(-6, 6), min_size=1, max_size=6).map(PolyQ).filter(lambda p: not p.is_zero())


@settings(max_examples=200)
@given(small_polys, small_polys, small_polys)
def test_gcd_symmetric_associative(a, b, c):
    # multiply in a shared factor so the gcds are not all trivial
    a, b = a * c, b * c
    assert gcd_poly(a, b) == gcd_poly(b, a)
    assert gcd_poly(gcd_poly(a, b), c) == gcd_poly(a, gcd_poly(b, c))
    g = gcd_poly(a, b)
    assert (a % g).is_zero() and (b % g).is_zero()
    # c divides both, so it divides their gcd
    assert (g % c).is_zero()


@settings(max_examples=200)
@given(small_polys, small_polys)
def test_prs_gcd_agrees_with_flint(a, b):
    assert prs_gcd(a, b) == gcd_poly(a, b)


@settings(max_examples=100)
@given(small_polys, small_polys)
def test_lcm_is_common_multiple(a, b):
    m = lcm_poly(a, b)
    assert (m % a).is_zero() and (m % b).is_zero()
    assert m.degree == a.degree + b.degree - gcd_poly(a, b).degree


def test_squarefree_examples():
    assert squarefree_part(P(0, 0, -2, 0, 1)) == P(0, -2, 0, 1)
    assert squarefree_part(P(0, -1, 1)) == P(0, -1, 1)
    assert squarefree_part(P(-1, 3, -3, 1)) == P(-1, 1)
    with pytest.raises(ValueError):
        squarefree_part(PolyQ())


@settings(max_examples=200)
@given(small_polys, st.integers(1, 3))
def test_squarefree_is_coprime_to_derivative(a, k):
    s = squarefree_part(a * a if k > 1 else a)
    if s.degree > 0:
        assert gcd_poly(s, s.derivative()) == P(1)
    assert s == squarefree_part(a)


# -- rational roots -------------------------------------------------------------------

def test_rational_roots_examples():
    assert rational_roots(P(0, -1, -2, 0, 1)) == {F(0), F(-1)}
    assert rational_roots(P(1, 0, 1)) == set()
    assert rational_roots(P(0, -1, 1)) == {F(0), F(1)}
    with pytest.raises(ValueError):
        rational_roots(PolyQ())


@settings(max_examples=200)
@given(st.lists(rationals(40, 40), min_size=1, max_size=5), st.integers(0, 3))
def test_rational_roots_of_products(roots, extra):
    poly = P(1)
    for r in roots:
        poly = poly * P(-r, 1)
    # an irreducible quadratic factor contributes no rational root
    poly = poly * P(2 + extra, 0, 1)
    assert rational_roots(poly) == set(roots)


@settings(max_examples=200)
@given(small_polys, st.lists(rationals(6, 6), max_size=3))
def test_rational_roots_two_methods_agree(a, roots):
    for r in roots:
        a = a * P(-r, 1)
    assert rational_roots(a) == rational_roots_by_test(a)


@pytest.mark.parametrize("c", [F(-21, 16), F(-3, 4), F(-29, 16)])
def test_rational_roots_two_methods_agree_on_preper(c):
    poly = preper_poly(c, 3, 1)
    assert rational_roots(poly) == rational_roots_by_test(poly)


# -- serialization ---------------------------------------------------------------------

@given(st.lists(rationals(100, 100), max_size=6))
def test_json_roundtrip(coeffs):
    p = PolyQ(coeffs)
    assert PolyQ.from_json(json.dumps(p.to_json())) == p
    assert PolyQ.from_json(p.to_json()) == p


def test_json_is_low_degree_first():
    assert P(F(-21, 16), 0, 1).to_json() == ["-21/16", "0", "1"]
