from fractions import Fraction as F

import pytest

from epreinvex import DualPoint, converse_duality_check, dual_feasible, weak_duality_scan
from epreinvex.duality import PremiseViolated, violating_instance
from epreinvex.vfp import grid_points, instance_I1, instance_I2

I1, I2 = instance_I1(), instance_I2()
GRID = grid_points(I1.K0, F(1, 16))
D0 = DualPoint.make([1], [0], 0, [0])


def test_dual_feasible_i1(euclid):
    assert dual_feasible(I1, euclid, D0, GRID).holds
    bad = dual_feasible(I1, euclid, DualPoint.make([1], [0], 0, [1]), GRID)
    assert bad.condition == "RATIO" and bad.witness["value"] == -2


def test_alpha_must_be_positive():
    with pytest.raises(ValueError):
        DualPoint.make([0], [0], 0, [0])


@pytest.mark.parametrize("c", [F(1, 5), 3])
def test_dual_scaling(euclid, c):
    for d in (D0, DualPoint.make([1], [1], 1, [1])):
        assert dual_feasible(I1, euclid, d, GRID).status == dual_feasible(I1, euclid, d.scaled(c), GRID).status


def test_weak_duality_i1_i2(euclid):
    assert weak_duality_scan(I1, euclid, GRID, [D0]).consistent
    assert weak_duality_scan(I1, euclid, GRID, []).consistent
    d2 = DualPoint.make([1, 1], [0], 0, [0, 1])
    assert dual_feasible(I2, euclid, d2, GRID).holds
    assert weak_duality_scan(I2, euclid, GRID, [d2]).consistent


def test_violation_linked_to_failed_hypothesis(euclid):
    inst, d = violating_instance()
    r = weak_duality_scan(inst, euclid, grid_points(inst.K0, F(1, 8)), [d])
    assert not r.consistent
    first = r.findings[0]
    assert first["k"] == -1
    assert [h["hypothesis"] for h in first["failed_hypotheses"]] == ["gpslep"]
    assert not any(f["theorem_counterexample"] for f in r.findings)


def test_converse_examples(euclid):
    assert converse_duality_check(I1, euclid, D0, 0, GRID).consistent
    assert converse_duality_check(I1, euclid, D0, 0, [0]).consistent
    with pytest.raises(PremiseViolated, match="1/3"):
        converse_duality_check(I1, euclid, D0, F(1, 2), GRID)
