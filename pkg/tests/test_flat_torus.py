import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fukaya_torus import AffineLine, Brane, TorusAmbient, arc_parameter, intersect, intersect_lines
from fukaya_torus.exceptions import InputParseError, ParallelLines, PointNotOnLine
from fukaya_torus.flat_torus import as_fraction, generic_offsets, lines_in_general_position, parse_branes
from oracles import grid_intersections

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=9)
primitive = st.tuples(st.integers(-5, 5), st.integers(-5, 5)).filter(
    lambda d: d != (0, 0) and __import__("math").gcd(*d) == 1
)


def test_as_fraction_accepts_strings_and_refuses_floats():
    assert as_fraction("3/7") == Fraction(3, 7)
    assert as_fraction(2) == 2
    with pytest.raises(InputParseError):
        as_fraction(0.5)
    with pytest.raises(InputParseError):
        as_fraction("x/2")


def test_non_primitive_direction_rejected():
    with pytest.raises(InputParseError):
        AffineLine((2, 4))


def test_slope_line_direction_and_partner():
    ln = AffineLine.slope(2, (0, Fraction(1, 3)))
    assert ln.direction == (1, -2)
    e = ln.partner
    assert ln.direction[0] * e[1] - ln.direction[1] * e[0] == 1


def test_horizontal_vertical_meet_once():
    pts = intersect_lines(AffineLine((1, 0)), AffineLine((0, 1), (Fraction(1, 2), 0)))
    assert pts == [(Fraction(1, 2), Fraction(0))]


def test_parallel_lines_raise():
    with pytest.raises(ParallelLines):
        intersect_lines(AffineLine((1, 1)), AffineLine((-1, -1), (0, Fraction(1, 2))))


def test_arc_parameter_one_period():
    ln = AffineLine((1, 0))
    assert arc_parameter(ln, (1, 0), base=(0, 0)) == 1


def test_point_not_on_line():
    with pytest.raises(PointNotOnLine):
        AffineLine((1, 0)).torus_parameter((0, Fraction(1, 2)))


@settings(max_examples=150, deadline=None)
@given(primitive, primitive, rationals, rationals, rationals, rationals)
def test_intersection_count_is_abs_det(d0, d1, a, b, c, d):
    det = d0[0] * d1[1] - d0[1] * d1[0]
    if det == 0:
        return
    l0, l1 = AffineLine(d0, (a, b)), AffineLine(d1, (c, d))
    pts = intersect_lines(l0, l1)
    assert len(pts) == abs(det)
    assert all(l0.contains(p) and l1.contains(p) for p in pts)
    assert pts == grid_intersections(l0.direction, l0.offset, l1.direction, l1.offset)


@settings(max_examples=60, deadline=None)
@given(primitive, rationals, rationals, st.integers(-3, 3), st.integers(-3, 3))
def test_offset_translation_by_lattice_is_invisible(d, a, b, i, j):
    assert AffineLine(d, (a, b)) == AffineLine(d, (a + i, b + j))


def test_product_brane_generators():
    b0 = Brane.slope((0, 1))
    b1 = Brane.slope((2, 3), [(0, Fraction(1, 3)), (0, Fraction(1, 5))])
    gens = intersect(b0, b1)
    assert len(gens) == 2 * 2
    assert len({g.point for g in gens}) == 4


def test_brane_json_round_trip():
    b = Brane.slope(1, [(Fraction(1, 3), 0)], holonomy=[Fraction(1, 4)], alpha_shift=[2])
    again = Brane.from_dict(json.loads(json.dumps(b.to_dict())))
    assert again == b


def test_parse_branes_reports_location():
    with pytest.raises(InputParseError, match=r"branes\[1\]"):
        parse_branes({"branes": [{"lines": [{"d": [1, 0]}]}, {"lines": [{"d": [2, 0]}]}]})


def test_ambient_validation():
    with pytest.raises(InputParseError):
        TorusAmbient((0.0,), (0.0,))
    with pytest.raises(InputParseError):
        TorusAmbient.from_dict({"n": 2, "area": [1.0], "b": [0.0]})
    amb = TorusAmbient.from_dict({"area": [2.0], "b": [0.5]})
    assert amb.tau == (complex(0.5, 2.0),)


def test_generic_offsets_deterministic_and_general():
    offs = generic_offsets(4, seed=3)
    assert offs == generic_offsets(4, seed=3)
    lines = [AffineLine.slope(k, o) for k, o in enumerate(offs)]
    assert lines_in_general_position(lines) in (True, False)
    assert not lines_in_general_position([AffineLine((1, 0)), AffineLine((0, 1)), AffineLine((1, 1))])
