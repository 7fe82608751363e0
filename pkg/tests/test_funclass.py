from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epreinvex import (
    FnClass,
    Theorem,
    build_probes,
    check_class,
    crosscheck_theorem,
    epigraph,
    level_set,
    piecewise_fn,
    polynomial_fn,
)
from epreinvex.funclass import NumericFn, UnsupportedForBlackBox, combine, verify_class_witness
from epreinvex.region import Region
from epreinvex.sets import ProbePolicy

R = Region.real_line()
SYM = Region.closed(-1, 1)


@pytest.mark.parametrize(
    "cls, pair, t, lhs, rhs",
    [
        ("gslec", (2, 3), F(1, 16), 1, F(15, 16)),
        ("gsep", (1, 4), 1, 1, 0),
        ("gslep", (3, 2), F(1, 16), F(1, 8), F(1, 16)),
    ],
)
def test_example2_refutations(ex2, h, cls, pair, t, lhs, rhs):
    v = check_class(h, ex2, R, cls, [], pairs=[pair])
    assert v.fails
    w = v.witness
    assert (w.k1, w.k2) == pair
    assert (w.t, w.lhs, w.rhs) == (t, lhs, rhs)
    assert verify_class_witness(h, ex2, R, cls, w)


def test_gslec_rhs_is_one_minus_t_everywhere(ex2, h):
    w = check_class(h, ex2, R, "gslec", [], pairs=[(2, 3)]).witness
    assert w.lhs_poly == (1,)
    assert w.rhs_poly == (1, -1)


def test_gslep_pair_32_polys(ex2, h):
    w = check_class(h, ex2, R, "gslep", [], pairs=[(3, 2)]).witness
    assert w.lhs_poly == (0, 2)
    assert w.rhs_poly == (0, 1)


def test_square_is_gep(euclid):
    probes = build_probes(SYM, euclid)
    v = check_class(polynomial_fn("x^2"), euclid, SYM, FnClass.GEP, probes)
    assert v.holds
    assert v.locality[(F(1), F(-1))] == (1, 1)


def test_negsquare_only_preincave(euclid):
    f = polynomial_fn("-x^2")
    got = {c: check_class(f, euclid, SYM, c, [-1, 0, 1]).status.value for c in FnClass}
    assert got[FnClass.PREINCAVE] == "holds"
    assert all(s == "fails" for c, s in got.items() if c is not FnClass.PREINCAVE)


def test_gpslep_slack_positive(euclid):
    v = check_class(polynomial_fn("x"), euclid, SYM, FnClass.GPSLEP, [-1, 0, 1])
    assert v.holds
    assert v.pseudo_slack and all(w > 0 for w in v.pseudo_slack.values())


def test_quasi_skips_pairs(euclid):
    v = check_class(polynomial_fn("x"), euclid, SYM, FnClass.GQSLEP, [-1, 1])
    assert v.pairs_skipped == 1 and v.holds


def test_black_box_is_sampled(euclid):
    f = NumericFn(lambda x: x * x, label="sq")
    v = check_class(f, euclid, SYM, FnClass.GSLEP, [-1, 0, 1])
    assert v.holds and v.sampled_pairs == 9
    with pytest.raises(UnsupportedForBlackBox):
        level_set(f, SYM, 0)


def test_combination_arithmetic():
    f = polynomial_fn("x", "f")
    g = polynomial_fn("x^2", "g")
    c = combine((2, f), (-1, g))
    assert c(3) == -3
    assert (f + g)(2) == 6
    assert (f - g)(2) == -2
    assert (F(1, 2) * g)(2) == 2


def test_epigraph_membership(h):
    om = epigraph(polynomial_fn("x"), Region.closed(0, 1))
    assert (F(1, 2), F(3, 4)) in om
    assert (F(1, 2), F(1, 4)) not in om
    assert (3, 1) in epigraph(h, R)


def test_level_sets(h):
    assert level_set(polynomial_fn("x^2"), SYM, F(1, 4)) == Region.closed(F(-1, 2), F(1, 2))
    assert level_set(h, Region.closed(-1, 3), 0) == Region.closed(1, 2)
    assert not level_set(polynomial_fn("x^2"), SYM, -1)


def test_epigraph_theorem_affine(euclid):
    unit = Region.closed(0, 1)
    r = crosscheck_theorem(Theorem.EPIGRAPH, polynomial_fn("x"), euclid, unit, build_probes(unit, euclid, ProbePolicy(F(1, 4))))
    assert r.consistent
    assert [row["status"] for row in r.rows] == ["holds", "holds"]


def test_glep_char_premise_rows(ex2, h):
    r = crosscheck_theorem(Theorem.GLEP_CHAR, h, ex2, R, [-1, F(1, 2), 2])
    prem = {row["k"]: (row["f(E(k))"], row["f(k)"]) for row in r.rows if "k" in row}
    assert prem[F(2)] == (0, 0)
    assert prem[F(-1)] == (1, 3)
    assert r.consistent


def test_levelset_theorem_square(euclid):
    r = crosscheck_theorem(Theorem.LEVELSET, polynomial_fn("x^2"), euclid, SYM, [-1, F(-1, 2), 0, F(1, 2), 1], levels=[F(1, 4), 1])
    assert r.consistent
    assert [row["level_set"] for row in r.rows[1:]] == ["[-1/2, 1/2]", "[-1, 1]"]


affine = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=25, deadline=None)
@given(affine, affine)
def test_max_of_affine_is_gslep(euclid, a, b):
    # a convex piecewise-affine function is GSLEP under the identity geometry
    f = piecewise_fn(
        [[f"{a[0]}*x + {a[1]} >= {b[0]}*x + {b[1]}", f"{a[0]}*x + {a[1]}"], ["true", f"{b[0]}*x + {b[1]}"]],
        "m",
    )
    assert check_class(f, euclid, SYM, FnClass.GSLEP, [-1, F(-1, 3), 0, F(1, 2), 1]).holds
