from fractions import Fraction as F
import itertools
import json

from hypothesis import given, settings, strategies as st
import pytest

from quaddyn.pairing import canonical_height
from quaddyn.preper import (common_preper, common_preper_oracle, is_preperiodic, minimal_bound,
                            orbit_status, preper_count_by_bound)

from _oracles import rationals

HYDE = (F(-21, 16), F(-29, 16))
SIX = [F(0), F(-1), F(-2), F(1, 4), F(-21, 16), F(-29, 16)]


# -- single orbits ------------------------------------------------------------------------

def test_is_preperiodic_examples():
    assert is_preperiodic(-1, 0)
    assert not is_preperiodic(0, 2)


def test_hyde_point_quarter_agrees_with_common_preper():
    rep = common_preper(*HYDE, 7)
    assert is_preperiodic(HYDE[0], F(1, 4)) == (F(1, 4) in rep.rational_points)


@settings(max_examples=300)
@given(rationals(30, 30), rationals(30, 30))
def test_orbit_status_is_consistent(c, x):
    st_ = orbit_status(c, x)
    y = x
    for _ in range(st_.steps):
        y = y * y + c
    assert y == st_.last
    if st_.preperiodic:
        # the last value was seen earlier in the orbit
        orbit = [x]
        for _ in range(st_.steps - 1):
            orbit.append(orbit[-1] ** 2 + c)
        assert st_.last in orbit


# -- common preperiodic points ----------------------------------------------------------------

def test_example_zero_minus_one():
    rep = common_preper(0, -1, 8)
    assert rep.rational_points == {F(0), F(1), F(-1)}
    assert rep.distinct_common_count == 3 and rep.include_infinity_total == 4


def test_example_hyde():
    rep = common_preper(*HYDE, 8)
    assert rep.include_infinity_total >= 27


def test_example_no_common_points():
    rep = common_preper(-1, 2, 6)
    assert rep.distinct_common_count == 0 and rep.include_infinity_total == 1


def test_diagonal_is_an_error():
    with pytest.raises(ValueError, match="intersection is the full preperiodic set"):
        common_preper(F(1, 3), F(1, 3), 2)


@pytest.mark.parametrize("bound", [0, 11])
def test_bound_cap(bound):
    with pytest.raises(ValueError):
        common_preper(0, -1, bound)


def test_hyde_minimal_bound():
    assert minimal_bound(*HYDE, 27) == 7


@pytest.mark.parametrize("pair", [(0, -1), HYDE, (F(1, 4), -2), (-1, -2)])
def test_monotone_in_bound(pair):
    counts = preper_count_by_bound(*pair, 6)
    assert counts == sorted(counts)


def test_rational_points_are_preperiodic_with_zero_height():
    for pair, bound in (((0, -1), 6), (HYDE, 7)):
        rep = common_preper(*pair, bound)
        for x in rep.rational_points:
            for c in pair:
                assert is_preperiodic(c, x)
                h = canonical_height(c, x)
                assert h.preperiodic and h.value.lo == 0 and h.value.hi == 0


def test_json_listing():
    rep = common_preper(0, -1, 3)
    d = json.loads(json.dumps(rep.to_json(with_polynomial=True)))
    assert d["distinct_common_count"] == 3 and d["include_infinity_total"] == 4
    assert d["rational_points"] == ["-1", "0", "1"]
    assert len(d["accumulator"]) == 4


# -- numeric oracle ---------------------------------------------------------------------------

@pytest.mark.parametrize("c1,c2", [p for p in itertools.permutations(SIX, 2)])
def test_oracle_equivalence_bound_three(c1, c2):
    assert common_preper_oracle(c1, c2, 3) == common_preper(c1, c2, 3).distinct_common_count


def test_oracle_examples():
    assert common_preper_oracle(0, -1, 4) == common_preper(0, -1, 4).distinct_common_count
    assert common_preper_oracle(-1, 2, 4) == 0


@settings(max_examples=10, deadline=None)
@given(rationals(100, 100))
def test_oracle_far_apart(c):
    assert common_preper_oracle(c, c + 10**10, 2) == 0
    assert common_preper(c, c + 10**10, 2).distinct_common_count == 0


def test_oracle_bound_cap():
    with pytest.raises(ValueError):
        common_preper_oracle(0, -1, 5)
