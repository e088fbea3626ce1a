import pytest
from hypothesis import given
from hypothesis import strategies as st

from normlab.measure_map import (
    PackingMap,
    cumulative_measure,
    initial_segment,
    packing_map,
    pushforward_compose,
    verify_mo,
)
from normlab.stepfn import Interval, IntervalSet, distribution, indicator, restrict
from strategies import interval_sets, step_functions

E = IntervalSet.from_pairs([(1, 2), (3, 4)])


@pytest.mark.parametrize("x, expected", [(3.5, 1.5), (0.5, 0.0), (10, 2.0), (0, 0.0), (2.5, 1.0)])
def test_cumulative_measure(x, expected):
    assert cumulative_measure(E, x) == expected


def test_cumulative_measure_rejects_negative():
    with pytest.raises(ValueError):
        cumulative_measure(E, -1)


def test_initial_segment():
    assert initial_segment(E, 1.5) == IntervalSet.from_pairs([(1, 2), (3, 3.5)])
    assert initial_segment(E, 0).is_empty()
    assert initial_segment(E, 2) == E
    for t in (-0.1, 2.1):
        with pytest.raises(ValueError):
            initial_segment(E, t)


def test_packing_map_examples():
    m = packing_map(E)
    assert m.segments == ((Interval(0, 1), 1.0), (Interval(1, 2), 2.0))
    assert m(0.5) == 1.5 and m(1.5) == 3.5
    ident = packing_map(IntervalSet.from_pairs([(0, 3)]))
    assert ident.segments == ((Interval(0, 3), 0.0),)
    assert packing_map(IntervalSet.from_pairs([(5, 6)])).segments == ((Interval(0, 1), 5.0),)
    with pytest.raises(ValueError):
        packing_map(IntervalSet())


def test_dump_format():
    assert packing_map(E).dump() == "0.0 1.0 1.0\n1.0 2.0 2.0\n"


def test_pushforward_examples():
    c, b = 3.0, 2.5
    shift = PackingMap(((Interval(0, b), c),))
    assert pushforward_compose(indicator(c, c + b), shift) == indicator(0, b)
    f = indicator(0.5, 1.5, 4)
    assert pushforward_compose(f, packing_map(IntervalSet.from_pairs([(0, 10)]))) == f
    assert pushforward_compose(indicator(3, 4, 2), packing_map(E)) == indicator(1, 2, 2)


def test_verify_mo_examples():
    m = packing_map(E)
    assert verify_mo(m, E.parts)
    overlapping = PackingMap(((Interval(0, 1), 1.0), (Interval(1, 2), 0.5)))
    assert not verify_mo(overlapping, [Interval(1, 2)])
    swapped = PackingMap(((Interval(0, 1), 2.0), (Interval(1, 2), 0.0)))
    assert not verify_mo(swapped, [Interval(1, 3)])


@given(interval_sets(nonempty=True), st.integers(0, 256))
def test_packing_inverts_cumulative_measure(F, k):
    m = packing_map(F)
    t = k / 256 * F.measure
    if t > 0:
        x = m(t)
        assert abs(cumulative_measure(F, x) - t) <= 1e-9
        assert t <= x
        assert m.inverse(x) == pytest.approx(t, abs=1e-12)
    assert abs(initial_segment(F, t).measure - t) <= 1e-9


@given(step_functions(), interval_sets(nonempty=True))
def test_pushforward_is_equimeasurable_with_restriction(f, F):
    m = packing_map(F)
    assert verify_mo(m, F.parts)
    assert distribution(pushforward_compose(f, m)) == distribution(restrict(f, F))
