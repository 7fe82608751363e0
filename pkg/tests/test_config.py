import warnings
from fractions import Fraction as F

import pytest

from epreinvex.config import ConfigError, OverlapWarning, UnknownReference, emit_config, parse_config
from epreinvex.region import Interval


def test_builtin_region_a():
    a = parse_config("").region("A").region
    assert a.intervals[0] == Interval(F(-4), True, F(-1), False)
    assert -1 not in a


def test_exact_coefficients():
    doc = parse_config('[function.g]\nexpr = "1/3*x"\n')
    assert doc.function("g")(1) == F(1, 3)


def test_user_document_overrides_builtin():
    doc = parse_config('[region.unit]\nintervals = ["[0, 2]"]\n')
    assert 2 in doc.region("unit").region


def test_unknown_space():
    text = '[vfp.X]\nspace = "nope"\nK0 = "unit"\nf = ["id"]\ng = ["one"]\nh = []\n'
    with pytest.raises(UnknownReference) as err:
        parse_config(text)
    assert (err.value.line, err.value.col) == (2, 9)


def test_syntax_error_position():
    with pytest.raises(ConfigError) as err:
        parse_config("[region.B\n")
    assert err.value.line == 1


def test_expression_error_position():
    with pytest.raises(ConfigError) as err:
        parse_config('[function.bad]\nexpr = "x +* 2"\n')
    assert err.value.line == 2


@pytest.mark.parametrize(
    "text",
    [
        "[function.k]\nexpr = 0.5\n",
        '[certificate.c]\nvfp = "I1"\npoint = 0.5\nzeta = ["1"]\nxi = ["0"]\n',
    ],
)
def test_floats_rejected(text):
    with pytest.raises(ConfigError, match="p/q"):
        parse_config(text)


def test_cycles_rejected():
    with pytest.raises(ConfigError, match="cyclic"):
        parse_config('[function.a]\ncombo = [["1", "b"]]\n[function.b]\ncombo = [["1", "a"]]\n')


def test_overlap_warning_keeps_order():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        doc = parse_config('[function.o]\npieces = [["x >= 0", "x"], ["x <= 1", "1"]]\n')
    assert any(issubclass(w.category, OverlapWarning) for w in caught)
    assert doc.function("o")(F(1, 2)) == F(1, 2)


def test_round_trip():
    doc = parse_config('[region.B]\nintervals = ["[0, 1/3]"]\n[function.g]\ncombo = [["2", "id"], ["-1/2", "square"]]\n')
    again = parse_config(emit_config(doc))
    assert again == doc
    assert emit_config(again) == emit_config(doc)


def test_named_objects_resolve():
    doc = parse_config("")
    inst, space = doc.vfp("I1")
    assert inst.p == 1 and space.label == "euclid"
    assert doc.policy("dense").grid_step == F(1, 64)
