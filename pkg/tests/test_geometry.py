from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from epreinvex import eval_E, eval_eta, eval_gamma, make_space, validate_space
from epreinvex.geometry import ParameterOutOfRange
from epreinvex.piecewise import NoPieceMatches

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=64)


def test_eval_E_examples(ex1, ex2, euclid):
    assert eval_E(ex1, 3) == -1
    assert eval_E(ex1, F(3, 2)) == F(9, 4)
    assert eval_E(ex2, 2) == 1
    assert eval_E(ex2, -5) == 0
    assert eval_E(euclid, F(7, 3)) == F(7, 3)


def test_eval_eta_examples(ex1, ex2, euclid):
    assert eval_eta(ex1, -3, -1) == -2
    assert eval_eta(ex2, 5, 5) == 0
    assert eval_eta(ex2, 3, 1) == -2
    assert eval_eta(euclid, 5, 2) == 3


def test_eval_gamma_examples(ex1, ex2, euclid):
    assert eval_gamma(ex1, -1, 0, 1) == -1
    assert eval_gamma(ex1, -1, 0, F(1, 3)) == F(-1, 3)
    assert eval_gamma(euclid, 2, 1, F(1, 2)) == F(3, 2)
    assert eval_gamma(ex2, 1, 3, F(1, 4)) == 3


def test_gamma_rejects_t_outside_unit(euclid):
    with pytest.raises(ParameterOutOfRange):
        eval_gamma(euclid, 0, 1, F(3, 2))


def test_uncovered_input_is_reported():
    sp = make_space("partial", [["x >= 0", "x"]], [["true", "x - y"]], [["true", "y + t*(x - y)"]])
    with pytest.raises(NoPieceMatches):
        eval_E(sp, -1)


@given(rationals, rationals)
def test_euclid_base_point(x, y):
    from epreinvex import builtin_space

    sp = builtin_space("euclid")
    assert eval_gamma(sp, x, y, 0) == y
    assert eval_gamma(sp, x, y, 1) == x


def test_validate_builtin_spaces(euclid, ex2):
    probes = [F(k, 4) for k in range(-8, 13)]
    assert validate_space(euclid, probes).ok
    rep = validate_space(ex2, probes)
    assert rep.base_violations == []


def test_validate_flags_wrong_base():
    bad = make_space("bad", [["true", "x"]], [["true", "x - y"]], [["true", "x + t*(y - x)"]])
    probes = [0, 1, 2]
    rep = validate_space(bad, probes)
    assert not rep.ok
    # every pair with distinct images breaks gamma(., ., 0) = E(k2)
    assert len(rep.base_violations) == 6
