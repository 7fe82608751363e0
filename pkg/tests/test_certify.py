from fractions import Fraction as F

import pytest

from epreinvex import Certificate, CertKind, check_certificate, check_class, polynomial_fn, soundness_probe, verify_hypotheses
from epreinvex.certify import CertStatus, DimensionMismatch, InfeasiblePoint, verify_refutation
from epreinvex.funclass import verify_class_witness
from epreinvex.region import Region
from epreinvex.vfp import VfpInstance, grid_points, instance_I1, instance_I2

I1, I2 = instance_I1(), instance_I2()
GRID = grid_points(I1.K0, F(1, 16))


def test_i1_at_zero_certified(euclid):
    v = check_certificate(I1, euclid, Certificate.make(0, [1], [0]), GRID)
    assert v.certified
    assert [row["condition"] for row in v.log] == ["FIXEDPOINT", "SIGNS", "EQ6", "EQ4", "EQ5"]


def test_i1_at_half_refuted_eq4(euclid):
    cert = Certificate.make(F(1, 2), [1], [0])
    v = check_certificate(I1, euclid, cert, GRID)
    assert v.status is CertStatus.REFUTED and v.condition == "EQ4"
    assert v.witness == {"k": 0, "value": F(-1, 2)}
    assert verify_refutation(I1, euclid, cert, v)


def test_slackness_refuted(euclid):
    cert = Certificate.make(0, [1], [1])
    v = check_certificate(I1, euclid, cert, GRID)
    assert v.condition == "EQ6" and v.witness["xi.h"] == -1
    assert verify_refutation(I1, euclid, cert, v)
    par = check_certificate(I1, euclid, Certificate.make(0, [1], [1], "parametric"), GRID)
    assert par.condition == "EQ18"


def test_sign_refuted(euclid):
    v = check_certificate(I1, euclid, Certificate.make(0, [-1], [0]), GRID)
    assert v.condition == "SIGNS"


def test_zero_zeta_warns(euclid):
    v = check_certificate(I1, euclid, Certificate.make(0, [0], [0]), GRID)
    assert v.certified and v.warnings


def test_fixed_point_required(ex1):
    inst = VfpInstance(I1.f, (polynomial_fn("5 - x"),), (), Region.closed(0, 4))
    v = check_certificate(inst, ex1, Certificate.make(3, [1], []), [0, 3])
    assert v.condition == "FIXEDPOINT"


def test_preconditions(euclid):
    with pytest.raises(DimensionMismatch):
        check_certificate(I1, euclid, Certificate.make(0, [1, 1], [0]), GRID)
    with pytest.raises(InfeasiblePoint):
        check_certificate(I1, euclid, Certificate.make(2, [1], [0]), GRID)


@pytest.mark.parametrize("kind", [k.value for k in CertKind])
def test_all_kinds_certify_i1_at_zero(euclid, kind):
    cert = Certificate.make(0, [1], [0], kind)
    assert check_certificate(I1, euclid, cert, GRID).certified
    assert verify_hypotheses(I1, euclid, cert, GRID).all_pass


@pytest.mark.parametrize("c", [F(1, 3), 2, 7])
def test_positive_scaling_invariance(euclid, c):
    for point in (0, F(1, 2)):
        cert = Certificate.make(point, [1], [0])
        a = check_certificate(I1, euclid, cert, GRID)
        b = check_certificate(I1, euclid, cert.scaled(c), GRID)
        assert (a.status, a.condition) == (b.status, b.condition)


def test_probe_shrinking_keeps_certified(euclid):
    cert = Certificate.make(0, [1], [0])
    for n in range(1, len(GRID)):
        assert check_certificate(I1, euclid, cert, GRID[:n]).certified


def test_hypotheses_i1(euclid):
    rep = verify_hypotheses(I1, euclid, Certificate.make(0, [1], [0]), GRID)
    assert rep.all_pass
    names = [r["hypothesis"] for r in rep.rows if not r["implicit"]]
    assert names == ["gslep", "gslep", "preincave", "semidifferentiable"]


def test_hypotheses_flag_example2_h(ex2, h):
    inst = VfpInstance((h,), (polynomial_fn("1"),), (), Region.real_line())
    rep = verify_hypotheses(inst, ex2, Certificate.make(1, [1], []), [2, 3])
    [row] = rep.failures()
    assert row["hypothesis"] == "gslep"
    assert verify_class_witness(h, ex2, inst.K0, "gslep", row["witness"])
    # the pair singled out in the worked example fails as well
    assert check_class(h, ex2, inst.K0, "gslep", [], pairs=[(3, 2)]).fails


def test_constant_instance_passes(euclid):
    inst = VfpInstance((polynomial_fn("2"),), (polynomial_fn("3"),), (polynomial_fn("-1"),), Region.closed(0, 1))
    assert verify_hypotheses(inst, euclid, Certificate.make(0, [1], [0]), GRID).all_pass


def test_soundness_examples(euclid):
    cert = Certificate.make(0, [1], [0])
    assert soundness_probe(I1, euclid, cert, GRID).consistent
    assert soundness_probe(I1, euclid, cert, [0]).consistent
    for k in GRID[::4]:
        assert soundness_probe(I2, euclid, Certificate.make(k, [1, 1], [0]), GRID).consistent


def test_soundness_skips_unmet_premises(euclid):
    r = soundness_probe(I1, euclid, Certificate.make(F(1, 2), [1], [0]), GRID)
    assert r.consistent and r.notes
