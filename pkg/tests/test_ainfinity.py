import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import OFFSETS, slope_chain, unit_inputs
from fukaya_torus import (
    Brane,
    CFElement,
    TorusAmbient,
    associativity_check,
    class_weight,
    enumerate_classes,
    holomorphic_count,
    intersect,
    mu,
    mu_with_report,
    tail_bound,
)
from fukaya_torus.exceptions import InputParseError, NonContributingClass, NonPositiveLeadingCoefficient
from fukaya_torus.polygons import AreaQuadratic
from oracles import brute_mu2


def oracle(branes, amb, rho=(1.0, 1.0)):
    outs = [g.point[0] for g in intersect(branes[0], branes[2])]
    p1 = intersect(branes[0], branes[1])[0].point[0]
    p2 = intersect(branes[1], branes[2])[0].point[0]
    lines = [(b.lines[0].direction, b.lines[0].offset) for b in branes]
    return brute_mu2(lines, [b.holonomy[0] for b in branes], p1, p2, outs, amb.tau[0], rho)


@pytest.mark.parametrize("b,area", [(0.0, 1.0), (0.25, 1.0), (0.0, 0.5), (0.4, 0.3)])
def test_mu2_matches_lifted_line_brute_force(b, area):
    branes = slope_chain(3, [0, Fraction(1, 3), Fraction(1, 5)])
    amb = TorusAmbient((area,), (b,))
    rep = mu_with_report(2, branes, unit_inputs(branes), amb, 1e-13)
    ref = oracle(branes, amb)
    err = max(abs(rep.element[(p,)] - v) for p, v in ref.items())
    assert err <= 1e-12
    assert rep.tail_bound < 1e-13


def test_tail_bound_m_squared_frozen():
    q = AreaQuadratic(Fraction(1), Fraction(0), Fraction(0))
    bound = tail_bound([q], 25, [1.0])
    exact = 2 * math.fsum(math.exp(-2 * math.pi * m * m) for m in range(6, 40))
    assert bound >= exact
    assert bound == pytest.approx(1.16e-98, rel=0.01)


def test_tail_bound_rejects_nonpositive_leading_coefficient():
    with pytest.raises(NonPositiveLeadingCoefficient):
        tail_bound([AreaQuadratic(Fraction(0), Fraction(1), Fraction(0))], 1, [1.0])


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12), st.sampled_from([0.3, 0.7, 1.0]))
def test_tail_bound_dominates_truncation(cutoff, area):
    branes = slope_chain(3, [0, Fraction(1, 3), Fraction(1, 5)])
    amb = TorusAmbient((area,), (0.0,))
    ref = oracle(branes, amb)
    ins = unit_inputs(branes)
    g1, g2 = intersect(branes[0], branes[1])[0], intersect(branes[1], branes[2])[0]
    from fukaya_torus.polygons import triangle_families

    for g0 in intersect(branes[0], branes[2]):
        part = sum(
            class_weight(c, [1, 1], branes, amb).value
            for c in enumerate_classes(branes, [g1, g2], g0, Fraction(cutoff), amb.area)
            if holomorphic_count(c)
        )
        quads = triangle_families(branes, [g1, g2], g0)
        assert abs(ref[g0.point[0]] - part) <= tail_bound(quads, cutoff, amb) * (1 + 1e-12) + 1e-15
    assert ins


def test_threads_do_not_change_bits():
    branes = slope_chain(3, [0, Fraction(1, 3), Fraction(1, 5)])
    amb = TorusAmbient((0.6,), (0.3,))
    a = mu(2, branes, unit_inputs(branes), amb, threads=1)
    b = mu(2, branes, unit_inputs(branes), amb, threads=4)
    assert a.coeffs == b.coeffs


def test_high_precision_mode_agrees():
    branes = slope_chain(3, [0, Fraction(1, 3), Fraction(1, 5)])
    amb = TorusAmbient((1.0,), (0.25,))
    a = mu(2, branes, unit_inputs(branes), amb)
    b = mu(2, branes, unit_inputs(branes), amb, precision=40)
    assert a.max_abs_difference(b) < 1e-14


def test_mu1_vanishes_and_degree_filter():
    b = slope_chain(2)
    amb = TorusAmbient.standard(1)
    assert mu(1, b, unit_inputs(b), amb).coeffs == {}
    # slopes 0, 2, 1: inputs of degree 0 and 1 but CF(l_0, l_1) sits in degree 0
    swapped = [Brane.slope(k, [OFFSETS[k]]) for k in (0, 2, 1)]
    rep = mu_with_report(2, swapped, unit_inputs(swapped), amb)
    assert rep.classes_used == 0 and rep.element.coeffs == {}


def test_mu3_converges_under_its_tail_bound():
    branes = slope_chain(4, [0, Fraction(1, 3), Fraction(1, 5), Fraction(2, 7)])
    amb = TorusAmbient((1.0,), (0.2,))
    rough = mu_with_report(3, branes, unit_inputs(branes), amb, 1e-4)
    fine = mu_with_report(3, branes, unit_inputs(branes), amb, 1e-13)
    assert rough.element.max_abs_difference(fine.element) <= rough.tail_bound + fine.tail_bound
    assert fine.element.degree == -1


def test_product_torus_k3_not_implemented():
    b = [Brane.slope((k, k), [OFFSETS[k], OFFSETS[k]]) for k in range(4)]
    with pytest.raises(NotImplementedError):
        mu(3, b, unit_inputs(b), TorusAmbient.standard(2))


def test_product_torus_mu2_factorizes():
    b1 = slope_chain(3, [0, Fraction(1, 3), Fraction(1, 5)])
    amb1 = TorusAmbient((1.0,), (0.1,))
    m1 = mu(2, b1, unit_inputs(b1), amb1)
    b2 = [Brane.slope((k, k), [OFFSETS[k], OFFSETS[k]], holonomy=[h, h]) for k, h in zip(range(3), [0, Fraction(1, 3), Fraction(1, 5)])]
    amb2 = TorusAmbient((1.0, 1.0), (0.1, 0.1))
    m2 = mu(2, b2, unit_inputs(b2), amb2)
    for p, v in m1.coeffs.items():
        assert m2[(p[0], p[0])] == pytest.approx(v * v, abs=1e-12)


def test_weight_modulus_ignores_b_and_holonomy():
    branes = slope_chain(3)
    g1, g2 = intersect(branes[0], branes[1])[0], intersect(branes[1], branes[2])[0]
    g0 = intersect(branes[0], branes[2])[0]
    c = enumerate_classes(branes, [g1, g2], g0, 10)[0]
    w0 = class_weight(c, [1, 1], branes, TorusAmbient((1.0,), (0.0,)))
    rng = random.Random(5)
    for _ in range(10):
        hol = [Fraction(rng.randrange(97), 97) for _ in range(3)]
        bs = [b.replace(holonomy=(h,)) for b, h in zip(branes, hol)]
        w = class_weight(c, [1, 1], bs, TorusAmbient((1.0,), (rng.random(),)))
        assert w.real_exponent == w0.real_exponent and w.modulus == w0.modulus


def test_noncontributing_class_raises():
    branes = slope_chain(3)
    g1, g2 = intersect(branes[0], branes[1])[0], intersect(branes[1], branes[2])[0]
    g0 = intersect(branes[0], branes[2])[0]
    c = enumerate_classes(branes, [g1, g2], g0, 10)[0]
    with pytest.raises(NonContributingClass):
        class_weight(c.reversed(), [1, 1], branes, TorusAmbient.standard(1))


def test_cf_element_rejects_non_generators():
    b0, b1 = slope_chain(2)
    with pytest.raises(InputParseError):
        CFElement(b0, b1, {((Fraction(1, 2), Fraction(1, 2)),): 1.0})


@settings(max_examples=5, deadline=None)
@given(st.lists(st.integers(1, 96), min_size=4, max_size=4), st.floats(0.05, 0.95))
def test_associativity_random_holonomy(hol, b):
    branes = slope_chain(4, [Fraction(h, 97) for h in hol])
    rep = associativity_check(branes, unit_inputs(branes), TorusAmbient((1.0,), (b,)), 1e-12)
    assert rep.passed and rep.discrepancy < 1e-9
