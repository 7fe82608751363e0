from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from epreinvex import ProbePolicy, SetProperty, Status, build_probes, check_set_property, locality_u, member
from epreinvex.region import Interval, Region, parse_interval
from epreinvex.sets import EmptyRegion

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=16)


def test_member_half_open(set_a):
    assert not member(set_a, -1)
    assert member(set_a, -4)
    assert not member(set_a, 0)
    assert member(set_a, F(-1001, 1000))
    assert member(set_a, 4)


def test_parse_interval_flags():
    iv = parse_interval("(1/3, 2]")
    assert iv == Interval(F(1, 3), False, F(2), True)
    assert parse_interval("(-inf, 0)").lo is None


def test_region_normalizes_adjacent_pieces():
    r = Region.parse(["[0, 1)", "[1, 2]"])
    assert r == Region.closed(0, 2)
    # touching open ends do not merge
    assert len(Region.parse(["[0, 1)", "(1, 2]"])) == 2


def test_complement_of_a(set_a):
    assert str(set_a.complement()) == "(-inf, -4) U [-1, 1) U (4, inf)"
    assert Region.real_line().complement() == Region.empty_region()


def test_probes_of_a(ex1, set_a):
    p = build_probes(set_a, ex1, ProbePolicy(F(1)))
    for x in (-4, -3, 1, 4):
        assert F(x) in p
    assert F(-1) not in p
    assert p.boundary == (F(-1),)


def test_probes_include_breakpoints(ex2):
    p = build_probes(Region.closed(-1, 3), ex2, ProbePolicy(F(1, 2)))
    for b in (0, 1, 2):
        assert F(b) in p
    assert F(129, 64) in p


def test_coarse_grid_is_endpoints_plus_breakpoints(euclid):
    p = build_probes(Region.closed(0, 1), euclid, ProbePolicy(F(5)))
    assert p.points == (F(0), F(1))


def test_unbounded_region_needs_window(euclid):
    with pytest.raises(EmptyRegion):
        build_probes(Region.real_line(), euclid)
    p = build_probes(Region.real_line(), euclid, ProbePolicy(F(1), window=Region.closed(0, 2)))
    assert p.points == (F(0), F(1), F(2))


def test_gei_refutation_printed_pair(ex1, set_a):
    v = check_set_property(ex1, set_a, SetProperty.GEI, [3, 0], pairs=[(3, 0)])
    assert v.status is Status.FAILS
    w = v.witness
    assert (w.k1, w.k2, w.t, w.point) == (3, 0, 1, -1)
    assert w.point not in set_a


def test_glei_fails_on_pair_33(ex1, set_a):
    v = check_set_property(ex1, set_a, SetProperty.GLEI, [3], pairs=[(3, 3)])
    assert v.fails
    assert (v.witness.t, v.witness.point) == (0, -1)


def test_euclid_unit_is_gei(euclid):
    probes = build_probes(Region.closed(0, 1), euclid)
    v = check_set_property(euclid, Region.closed(0, 1), SetProperty.GEI, probes)
    assert v.holds
    assert v.certificate[(F(1), F(0))] == (1, 1)


def test_starshaped_on_union_fails(euclid):
    r = Region.parse(["[0, 1]", "[2, 3]"])
    v = check_set_property(euclid, r, SetProperty.GEI, [0, 3])
    assert v.fails
    assert v.witness.point not in r


def test_locality_examples(ex1, euclid, set_a):
    assert locality_u(ex1, set_a, 2, 1) == 1
    assert locality_u(ex1, set_a, 3, 3) is None
    assert locality_u(euclid, Region.closed(0, 1), 1, 0) == 1
    # the segment from 0 toward 4 leaves [0, 1] at t = 1/4
    assert locality_u(euclid, Region.closed(0, 1), 4, 0) == F(1, 4)


@given(rationals, rationals, rationals)
def test_interval_membership_matches_inequalities(a, b, x):
    lo, hi = min(a, b), max(a, b)
    r = Region.parse([f"[{lo}, {hi})"])
    assert member(r, x) == (lo <= x < hi)


@given(st.lists(st.tuples(rationals, rationals), max_size=4), rationals)
def test_complement_partitions_line(pairs, x):
    r = Region(Interval.closed(min(a, b), max(a, b)) for a, b in pairs)
    assert (x in r) != (x in r.complement())
