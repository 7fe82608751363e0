from fractions import Fraction as F

import pytest

from epreinvex import active_set, crosscheck_lemma1, feasible, lambda_star, objective_ratio, polynomial_fn, weak_efficient_oracle
from epreinvex.region import Region
from epreinvex.vfp import NonpositiveDenominator, VfpInstance, grid_points, inactive_set, instance_I1, instance_I2

I1, I2 = instance_I1(), instance_I2()


def test_feasibility():
    assert feasible(I1, F(1, 2))
    out = feasible(I1, F(3, 2))
    assert not out and out.outside_K0 and out.violated == (0,)
    assert feasible(I1, 1)


@pytest.mark.parametrize("k, ratio", [(0, 0), (1, 1), (F(1, 2), F(1, 3))])
def test_ratio(k, ratio):
    assert objective_ratio(I1, k) == (ratio,)
    assert lambda_star(I1, k) == (ratio,)


def test_zero_numerator_gives_zero_lambda():
    inst = VfpInstance((polynomial_fn("0"),), (polynomial_fn("1"),), (), Region.closed(0, 1))
    assert lambda_star(inst, F(1, 3)) == (0,)


def test_active_sets():
    assert active_set(I1, 1) == (0,)
    assert active_set(I1, 0) == ()
    inst = VfpInstance(I1.f, I1.g, (polynomial_fn("x - 1"), polynomial_fn("x")), I1.K0)
    assert active_set(inst, 0) == (1,)
    assert inactive_set(inst, 0) == (0,)


def test_denominator_check():
    inst = VfpInstance((polynomial_fn("x"),), (polynomial_fn("x"),), (), Region.closed(0, 1))
    with pytest.raises(NonpositiveDenominator):
        inst.check_denominators([0, 1])
    with pytest.raises(NonpositiveDenominator):
        objective_ratio(inst, 0)


def test_oracle_i1():
    grid = grid_points(I1.K0, F(1, 8))
    assert len(grid) == 9
    res = weak_efficient_oracle(I1, grid)
    assert res.efficient == [0]
    assert res.dominated[F(1, 2)] == 0
    assert weak_efficient_oracle(I1, grid, "parametric", [0]).efficient == [0]


def test_oracle_i2_everything_efficient():
    grid = grid_points(I2.K0, F(1, 8))
    assert weak_efficient_oracle(I2, grid).efficient == grid


def test_oracle_skips_infeasible():
    res = weak_efficient_oracle(I1, [0, 1, 2])
    assert res.infeasible == [2]


def test_parametric_needs_lambda():
    with pytest.raises(ValueError):
        weak_efficient_oracle(I1, [0], "parametric")


def test_lemma1_examples():
    r = crosscheck_lemma1(I1, grid_points(I1.K0, F(1, 8)))
    assert r.consistent
    half = next(row for row in r.rows if row["k"] == F(1, 2))
    assert half["fractional"] is False and half["parametric"] is False
    assert crosscheck_lemma1(I2, grid_points(I2.K0, F(1, 4))).consistent
    assert crosscheck_lemma1(I1, [F(1, 2)]).consistent


def test_grid_points_union():
    r = Region.parse(["[0, 1/2)", "[1, 1]"])
    assert grid_points(r, F(1, 4)) == [0, F(1, 4), 1]
