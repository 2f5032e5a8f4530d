#!/usr/bin/env python3
"""
Tests for interval numbers, cells, alpha-cuts and the cell grammar
"""

import math
import os
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add current directory to path for imports
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from utils.errors import AlphaOutOfRange, CellSyntaxError, InvalidDomain, InvalidInterval, TrapezoidNeedsAlpha
from utils.interval_core import (EMPTY, AttributeDomain, ConfidenceInterval, Crisp, Interval, Null, Trapezoid,
                                 alpha_cut, contains, format_cell, intersect, membership, modular, parse_cell,
                                 to_interval, union_hull, within_domain)

DOM = AttributeDomain(0, 100)


def test_interval_rejects_reversed_bounds():
    with pytest.raises(InvalidInterval):
        Interval(9, 1)
    with pytest.raises(InvalidInterval):
        Interval(float('nan'), 1)
    assert Interval(3, 3).is_degenerate


def test_domain_defaults_and_validation():
    dom = AttributeDomain(0, 100)
    assert dom.theta == 100
    assert dom.delta == pytest.approx(0.01)
    assert dom.epsilon == pytest.approx(0.01)
    assert not dom.epsilon_overridden
    assert AttributeDomain(0, 100, epsilon=0.5).epsilon_overridden

    with pytest.raises(InvalidDomain):
        AttributeDomain(-1, 10)
    with pytest.raises(InvalidDomain):
        AttributeDomain(5, 5)
    with pytest.raises(InvalidDomain):
        AttributeDomain(0, 100, theta=50)
    for bad in ({'upper': math.inf}, {'theta': math.inf}, {'epsilon': math.inf}, {'theta': math.nan}):
        with pytest.raises(InvalidDomain):
            AttributeDomain(**{'lower': 0, 'upper': 100, **bad})


def test_to_interval():
    assert to_interval(Crisp(3.6), DOM) == Interval(3.6, 3.6)
    assert to_interval(Null(), DOM) == Interval(0, 100)
    assert to_interval(ConfidenceInterval(Interval(1, 9), 0.8), DOM) == Interval(1, 9)
    with pytest.raises(TrapezoidNeedsAlpha):
        to_interval(Trapezoid(1, 2, 3, 4), DOM)


def test_alpha_cuts():
    tz = Trapezoid(1, 2, 3, 4)
    assert alpha_cut(tz, 0.5, DOM) == Interval(1.5, 3.5)
    assert alpha_cut(tz, 1.0, DOM) == Interval(2, 3)
    assert alpha_cut(tz, 0.0, DOM) == Interval(1, 4)

    ci = ConfidenceInterval(Interval(1, 9), 0.8)
    assert alpha_cut(ci, 0.8, DOM) == Interval(1, 9)
    assert alpha_cut(ci, 0.9, DOM) is EMPTY

    assert alpha_cut(Null(), 0.7, DOM) == Interval(0, 100)
    assert alpha_cut(Crisp(4), 0.3, DOM) == Interval(4, 4)

    with pytest.raises(AlphaOutOfRange):
        alpha_cut(tz, 1.5, DOM)
    with pytest.raises(AlphaOutOfRange):
        alpha_cut(tz, -0.1, DOM)


def test_cut_agrees_with_membership():
    tz = Trapezoid(1, 2, 3, 4)
    for alpha in (0.1, 0.3, 0.6, 0.9):
        cut = alpha_cut(tz, alpha, DOM)
        for step in range(0, 21):
            u = step * 0.25
            inside = cut.lower <= u <= cut.upper
            assert inside == (membership(tz, u, DOM) >= alpha), (alpha, u)

    assert membership(tz, 1.5, DOM) == pytest.approx(0.5)
    assert membership(tz, 2.5, DOM) == 1.0
    assert membership(tz, 5, DOM) == 0.0
    assert membership(ConfidenceInterval(Interval(1, 9), 0.8), 4, DOM) == 0.8
    assert membership(Null(), 50, DOM) == 1.0


@settings(max_examples=500, deadline=None)
@given(st.lists(st.floats(min_value=0, max_value=100, allow_nan=False), min_size=4, max_size=4),
       st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=1))
def test_trapezoid_cuts_are_nested(points, alpha1, alpha2):
    a, b, c, d = sorted(points)
    low, high = sorted((alpha1, alpha2))
    tz = Trapezoid(a, b, c, d)
    assert contains(alpha_cut(tz, low, DOM), alpha_cut(tz, high, DOM))


def test_modular_special_cases():
    assert modular(EMPTY, DOM) == 0.0
    assert modular(Interval(5, 5), DOM) == pytest.approx(0.01)
    assert modular(Interval(5, 5), AttributeDomain(0, 100, epsilon=0.2), extended=True) == 0.2
    assert modular(Interval(0, math.inf), DOM) == 100
    assert modular(Interval(1, 9), DOM) == 8


def test_intersection_hull_and_containment():
    assert intersect(Interval(1, 9), Interval(1, 8)) == Interval(1, 8)
    assert intersect(Interval(1, 2), Interval(5, 6)) is EMPTY
    assert intersect(EMPTY, Interval(1, 2)) is EMPTY
    assert union_hull(Interval(1, 2), Interval(5, 6)) == Interval(1, 6)
    assert contains(Interval(0, 10), Interval(2, 3))
    assert not contains(Interval(2, 3), Interval(0, 10))
    assert contains(Interval(2, 3), EMPTY)
    assert not EMPTY


def test_within_domain():
    dom = AttributeDomain(0, 10)
    assert within_domain(Crisp(10), dom)
    assert not within_domain(Crisp(11), dom)
    assert not within_domain(ConfidenceInterval(Interval(5, 12)), dom)
    assert within_domain(Null(), dom)
    assert not within_domain(Trapezoid(1, 2, 3, 40), dom)


def test_parse_cells():
    assert parse_cell('3.6') == Crisp(3.6)
    assert parse_cell('null') == Null()
    assert parse_cell(' NULL ') == Null()
    assert parse_cell('[1,9]/0.8') == ConfidenceInterval(Interval(1, 9), 0.8)
    assert parse_cell('[1, 9]') == ConfidenceInterval(Interval(1, 9), 1.0)
    assert parse_cell('tz(1,2,3,4)') == Trapezoid(1, 2, 3, 4)
    assert parse_cell('1e-05') == Crisp(1e-05)


@pytest.mark.parametrize('text,column', [
    ('[9,1]', 1),
    ('[1,9]/1.5', 7),
    ('tz(4,3,2,1)', 1),
    ('abc', 1),
    ('#', 1),
    ('[1,9', 5),
    ('3.6 4', 5),
])
def test_parse_errors_carry_columns(text, column):
    with pytest.raises(CellSyntaxError) as info:
        parse_cell(text)
    assert info.value.column == column


def test_format_cell_reads_back():
    for text in ('3.6', 'null', '[1,9]/0.8', '[1,9]', 'tz(1,2,3.5,4)', '1e-05', '0.1'):
        value = parse_cell(text)
        assert format_cell(value) == text
        assert parse_cell(format_cell(value)) == value
    assert format_cell(ConfidenceInterval(Interval(0.1 + 0.2, 1))) == '[0.30000000000000004,1]'


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
