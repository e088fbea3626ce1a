import math

import numpy as np
import pytest

from normlab.weights import (
    WeightError,
    WeightFunction,
    adaptive_simpson,
    parse_weight_function,
    weight_cumulative,
)


def test_power_closed_forms():
    W = WeightFunction.power(0.5)
    assert weight_cumulative(W, 1.0) == pytest.approx(2 * (math.sqrt(2) - 1), rel=1e-15)
    assert weight_cumulative(W, 0.0) == 0.0
    log_w = WeightFunction.power(1.0)
    for r in (0.5, 1.0, 53.6, 1e4):
        assert weight_cumulative(log_w, r) == pytest.approx(math.log(r + 1), rel=1e-15)


def test_negative_argument_rejected():
    with pytest.raises(WeightError):
        weight_cumulative(WeightFunction.power(0.5), -1.0)


def test_bad_alpha_and_spec():
    for alpha in (0.0, 1.5):
        with pytest.raises(WeightError):
            WeightFunction.power(alpha)
    with pytest.raises(WeightError):
        parse_weight_function("exp:1")
    assert parse_weight_function("power:0.5") == WeightFunction.power(0.5)
    assert parse_weight_function("fromW:power:0.25").alpha == 0.25


def test_adaptive_simpson_against_closed_form():
    assert adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2.0, abs=1e-10)
    val = adaptive_simpson(lambda t: (t + 1) ** -0.5, 0, 50)
    assert val == pytest.approx(2 * (math.sqrt(51) - 1), abs=1e-9)


def test_quadrature_weight_matches_power_family():
    closed = WeightFunction.power(0.5)
    quad = WeightFunction.from_callable(lambda t: (t + 1.0) ** -0.5, name="sqrt")
    xs = np.array([0.0, 0.3, 1.0, 2.0, 7.5, 40.0])
    assert np.allclose(quad.cumulative(xs), closed.cumulative(xs), atol=1e-9, rtol=0)
    assert quad.cumulative(1.0) == pytest.approx(closed.cumulative(1.0), abs=1e-10)


def test_from_callable_validation():
    with pytest.raises(WeightError):
        WeightFunction.from_callable(lambda t: t + 1)
    with pytest.raises(WeightError):
        WeightFunction.from_callable(lambda t: -1.0)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0])
def test_weight_class_conditions(alpha):
    report = WeightFunction.power(alpha).class_report()
    assert all(report.values()), report


def test_integrable_but_bounded_weight_fails_class():
    W = WeightFunction.from_callable(lambda t: (t + 1.0) ** -2, name="fast")
    assert not W.class_report()["unbounded_cumulative"]
