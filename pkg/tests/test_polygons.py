from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import OFFSETS, slope_chain
from fukaya_torus import AffineLine, Brane, class_geometry, enumerate_classes, holomorphic_count, intersect
from fukaya_torus.exceptions import CutoffTooSmall, DegenerateClass, ParallelLines
from fukaya_torus.polygons import AreaQuadratic, _factor_problems, make_class, triangle_families


def corners(branes):
    k = len(branes) - 1
    ins = [intersect(branes[j - 1], branes[j])[0] for j in range(1, k + 1)]
    return ins, intersect(branes[k], branes[0])


def test_unit_triangle_area_and_orientation():
    lines = [AffineLine((1, 0)), AffineLine((-1, 1)), AffineLine((0, 1))]
    c = make_class([lines], [[(0, 0), (1, 0), (0, 1)]])
    geom = class_geometry(c)
    assert geom.euclidean_area == (Fraction(1, 2),)
    assert geom.arc_displacement[0] == (1,)
    assert holomorphic_count(c) == 1
    assert holomorphic_count(c.reversed()) == 0


def test_zero_area_is_degenerate():
    lines = [AffineLine((1, 0)), AffineLine((1, 0)), AffineLine((1, 0))]
    c = make_class([lines], [[(0, 0), (1, 0), (2, 0)]])
    with pytest.raises(DegenerateClass):
        class_geometry(c)


def test_self_crossing_quadrilateral_rejected():
    lines = [AffineLine((1, 1)), AffineLine((0, 1)), AffineLine((1, -1)), AffineLine((0, 1))]
    bowtie = make_class([lines], [[(0, 0), (1, 1), (1, 0), (0, 1)]])
    assert holomorphic_count(bowtie) == 0


def test_triangle_family_is_exactly_quadratic():
    b = slope_chain(3)
    ins, outs = corners(b)
    for g0 in outs:
        classes = enumerate_classes(b, ins, g0, 60)
        areas = [class_geometry(c).euclidean_area[0] for c in classes]
        quad = triangle_families(b, ins, g0)[0]
        assert quad.a > 0
        assert len(areas) >= 5
        # exact second differences along consecutive members of the family
        d2 = [areas[i + 2] - 2 * areas[i + 1] + areas[i] for i in range(len(areas) - 2)]
        assert len(set(d2)) == 1 and d2[0] == 2 * quad.a
        assert sorted(areas) == sorted(quad(j) for j in quad.window(60))


def test_brute_force_window_matches_quadratic_window():
    b = slope_chain(3)
    ins, outs = corners(b)
    prob = _factor_problems(b, [outs[0]] + ins)[0]
    brute = []
    for m in range(-50, 51):
        fp = prob.polygon((m,))
        if fp is not None:
            area = abs(sum(fp.corners[i][0] * fp.corners[(i + 1) % 3][1] - fp.corners[i][1] * fp.corners[(i + 1) % 3][0] for i in range(3))) / 2
            if 0 < area <= 40:
                brute.append(m)
    found = [c.lift_indices[0][0] for c in enumerate_classes(b, ins, outs[0], 40)]
    assert found == brute


def test_minimal_triangle_is_counterclockwise():
    b = slope_chain(3)
    ins, outs = corners(b)
    classes = [c for g0 in outs for c in enumerate_classes(b, ins, g0, 20)]
    smallest = min(classes, key=lambda c: class_geometry(c).euclidean_area[0])
    assert holomorphic_count(smallest) == 1
    assert holomorphic_count(smallest.reversed()) == 0


def test_bigons_and_zero_cutoff_are_empty():
    b = slope_chain(2)
    g1 = intersect(b[0], b[1])[0]
    g0 = intersect(b[1], b[0])[0]
    assert enumerate_classes(b, [g1], g0, 100) == []
    c3 = slope_chain(3)
    ins, outs = corners(c3)
    assert enumerate_classes(c3, ins, outs[0], 0) == []


def test_cutoff_too_small_only_when_strict():
    b = slope_chain(3)
    ins, outs = corners(b)
    tiny = Fraction(1, 10**6)
    assert enumerate_classes(b, ins, outs[0], tiny) == []
    with pytest.raises(CutoffTooSmall):
        enumerate_classes(b, ins, outs[0], tiny, strict=True)


def test_parallel_neighbours_raise():
    b = [Brane.slope(0), Brane.slope(0, [(0, Fraction(1, 2))]), Brane.slope(1)]
    with pytest.raises(ParallelLines):
        enumerate_classes(b, [(( 0, 0),), ((0, 0),)], ((0, 0),), 5)


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_base_lift_translation_is_a_bijection(i, j):
    b = slope_chain(3)
    ins, outs = corners(b)
    for g0 in outs:
        ref = enumerate_classes(b, ins, g0, 30)
        moved = enumerate_classes(b, ins, g0, 30, base_shift=[(i, j)])
        assert {c.key() for c in ref} == {c.key() for c in moved}
        ga = sorted((class_geometry(c).euclidean_area, class_geometry(c).arc_displacement) for c in ref)
        gb = sorted((class_geometry(c).euclidean_area, class_geometry(c).arc_displacement) for c in moved)
        assert ga == gb


def test_quadrilateral_window_is_complete():
    b = slope_chain(4)
    ins, outs = corners(b)
    cutoff = Fraction(12)
    for g0 in outs:
        prob = _factor_problems(b, [g0] + ins)[0]
        brute = set()
        for ms in product(range(-25, 26), repeat=2):
            fp = prob.polygon(ms)
            if fp is None:
                continue
            c = make_class([prob.lines], [fp.corners], [ms])
            try:
                area = class_geometry(c).euclidean_area[0]
            except DegenerateClass:
                continue
            if area <= cutoff and holomorphic_count(c):
                brute.add(ms)
        found = {c.lift_indices[0] for c in enumerate_classes(b, ins, g0, cutoff) if holomorphic_count(c)}
        assert found == brute


def test_area_quadratic_window_exact():
    q = AreaQuadratic(Fraction(1, 4), Fraction(1, 3), Fraction(1, 9))
    win = q.window(5)
    assert all(q(j) <= 5 for j in win)
    assert q(win.start - 1) > 5 and q(win.stop) > 5
    assert AreaQuadratic(Fraction(1), Fraction(0), Fraction(1)).window(Fraction(1, 2)) == range(0)


def test_product_classes_combine_factors():
    b = [Brane.slope((k, k), [OFFSETS[k], OFFSETS[k]]) for k in range(3)]
    ins, outs = corners(b)
    classes = enumerate_classes(b, ins, outs[0], 6)
    assert classes
    for c in classes:
        assert c.n == 2
        assert sum(class_geometry(c).euclidean_area) <= 6


def test_class_dump_json():
    b = slope_chain(3)
    ins, outs = corners(b)
    c = enumerate_classes(b, ins, outs[0], 10)[0]
    d = c.to_dict()
    assert set(d) == {"lift_indices", "corners", "area", "verdict"}
