from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fukaya_torus import AffineLine, Brane, clockwise_gap, degree, expected_dimension, grading_table, intersect, serre_pair
from fukaya_torus.exceptions import ParallelLines, PointNotOnLine
from fukaya_torus.grading import brane_degree, hom_space_dict, phase

primitive = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(
    lambda d: d != (0, 0) and __import__("math").gcd(*d) == 1
)


def test_phase_range():
    assert phase((1, 0)) == 0
    assert phase((0, 1)) == 0.5
    assert phase((0, -1)) == 0.5
    assert phase((1, -1)) == pytest.approx(0.25)


@pytest.mark.parametrize("d0,d1,gap", [((1, 0), (1, -1), 0.25), ((1, -1), (1, 0), 0.75), ((1, 0), (0, 1), 0.5)])
def test_clockwise_gaps(d0, d1, gap):
    assert clockwise_gap(d0, d1) == pytest.approx(gap)


def test_gap_of_parallel_lines_raises():
    with pytest.raises(ParallelLines):
        clockwise_gap((1, 1), (2, 2))


def test_grading_table_n1_frozen():
    rows = {(a, b): d for a, b, d in grading_table(1, range(-1, 2))}
    assert rows == {(-1, 0): 0, (-1, 1): 0, (0, -1): 1, (0, 1): 0, (1, -1): 1, (1, 0): 1}


def test_alpha_shift_moves_degree():
    b0, b1 = Brane.slope(0), Brane.slope(1, alpha_shift=[3])
    assert brane_degree(b0, b1) == 3


@settings(max_examples=200, deadline=None)
@given(primitive, primitive, st.integers(-2, 2), st.integers(-2, 2))
def test_serre_duality_property(d0, d1, s0, s1):
    if d0[0] * d1[1] - d0[1] * d1[0] == 0:
        return
    b0 = Brane((AffineLine(d0),), (s0,))
    b1 = Brane((AffineLine(d1, (Fraction(1, 3), 0)),), (s1,))
    for g in intersect(b0, b1):
        a, b = serre_pair(b0, b1, g)
        assert a + b == 1


def test_degree_rejects_foreign_point():
    b0, b1 = Brane.slope(0), Brane.slope(1)
    g = intersect(b0, b1)[0]
    other = intersect(Brane.slope(0, [(0, Fraction(1, 2))]), b1)[0]
    assert degree(b0, b1, g) == 0
    with pytest.raises(PointNotOnLine):
        degree(b0, b1, other)


def test_expected_dimension():
    assert expected_dimension(0, [0, 0]) == 0
    assert expected_dimension(-1, [0, 0, 0]) == 0
    with pytest.raises(ValueError):
        expected_dimension(0, [])


def test_hom_space_dict_shape():
    out = hom_space_dict(Brane.slope(0), Brane.slope(3, [(0, Fraction(1, 2))]))
    assert out["counts_by_degree"] == {"0": 3}
    assert all(len(g["point"]) == 2 for g in out["generators"])


@settings(max_examples=200, deadline=None)
@given(primitive, primitive, st.integers(1, 3))
def test_gap_invariant_under_common_rotation(d0, d1, quarter_turns):
    # rotating the identification of T_pT^2 with C moves both phases together
    if d0[0] * d1[1] - d0[1] * d1[0] == 0:
        return
    r0, r1 = d0, d1
    for _ in range(quarter_turns):
        r0, r1 = (-r0[1], r0[0]), (-r1[1], r1[0])
    assert clockwise_gap(r0, r1) == pytest.approx(clockwise_gap(d0, d1))
