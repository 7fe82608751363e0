from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epreinvex import check_lemma2, piecewise_fn, polynomial_fn, semiderivative
from epreinvex.semidiff import BaseNotFixedByE, Kind

ABS = piecewise_fn([["x >= 0", "x"], ["x < 0", "-x"]], "abs")


def test_square_exact_and_numeric(euclid):
    f = polynomial_fn("x^2")
    d = semiderivative(f, euclid, 1, 3, mode="exact")
    assert d.kind is Kind.FINITE and d.value == 4
    n = semiderivative(f, euclid, 1, 3, mode="numeric")
    assert abs(n.value - 4) <= 1e-8
    assert n.error_estimate < 1e-8


def test_abs_at_kink(euclid):
    assert semiderivative(ABS, euclid, 0, 1).value == 1
    assert semiderivative(ABS, euclid, 0, -1).value == 1


def test_divergent_example(ex2, h):
    lit = semiderivative(h, ex2, F(1, 2), 3, curve="literal")
    assert lit.kind is Kind.PLUS_INF and lit.value is None
    assert lit.render() == "+inf"
    num = semiderivative(h, ex2, F(1, 2), 3, mode="numeric", curve="literal")
    assert num.kind is Kind.PLUS_INF
    # the anchored curve starts at the base point itself
    assert semiderivative(h, ex2, F(1, 2), 3).value == 2


def test_downward_jump(euclid):
    step = piecewise_fn([["x <= 0", "1"], ["x > 0", "0"]], "step")
    assert semiderivative(step, euclid, 0, 1).kind is Kind.MINUS_INF
    assert semiderivative(step, euclid, 0, 1, mode="numeric").kind is Kind.MINUS_INF


def test_base_must_be_fixed(ex1):
    with pytest.raises(BaseNotFixedByE):
        semiderivative(polynomial_fn("x"), ex1, 3, 0)


def test_unknown_mode(euclid):
    with pytest.raises(ValueError):
        semiderivative(polynomial_fn("x"), euclid, 0, 1, mode="symbolic")


def test_lemma2_square_pass(euclid):
    r = check_lemma2(polynomial_fn("x^2"), euclid, 1, [3], "preinvex")
    assert r.consistent
    assert r.rows[0]["f(k)-f(base)"] == 8 and r.rows[0]["semiderivative"] == "4"


def test_lemma2_degenerate_probe(euclid):
    assert check_lemma2(polynomial_fn("-x^2"), euclid, 0, [0], "preinvex").consistent


def test_lemma2_negsquare_violation(euclid):
    r = check_lemma2(polynomial_fn("-x^2"), euclid, 0, [3], "preinvex")
    assert not r.consistent
    assert r.findings[0]["hypothesis"] == "gslep"


@settings(max_examples=40, deadline=None)
@given(
    st.integers(-4, 4),
    st.integers(-4, 4),
    st.fractions(-2, 2, max_denominator=8),
    st.fractions(-3, 3, max_denominator=8),
)
def test_exact_matches_numeric_affine_kink(euclid, a, b, base, target):
    f = piecewise_fn([["x <= 0", f"{a}*x"], ["x > 0", f"{b}*x"]], "k")
    ex = semiderivative(f, euclid, base, target, mode="exact")
    nu = semiderivative(f, euclid, base, target, mode="numeric")
    assert ex.kind is Kind.FINITE
    assert abs(float(ex.value) - nu.value) <= 1e-8
