"""Phases, canonical short paths and Maslov degrees of affine branes.

Conventions
-----------
The tangent line of a circle with direction ``d = (u, v)`` is identified with
the real line ``span(u + i v)`` in ``C`` (coordinate ``r + i theta``).  Its
phase ``phi(d)`` is the representative in ``(-1/2, 1/2]`` with
``exp(-i pi phi) R = span(u + i v)``; the vertical direction gets ``phi = 1/2``.
A grading lift on one factor is ``alpha = -phi(d) + alpha_shift``.

The canonical short path rotates clockwise, by ``exp(-i pi t Delta)`` with
``Delta`` in ``(0, 1)``, and the degree of an intersection point is
``sum_j (alpha_1 - alpha_0 + Delta)`` over the factors.  Because ``Delta`` is
``phi_1 - phi_0`` reduced into ``(0, 1)``, each factor contributes
``shift_1 - shift_0 + [phi_1 < phi_0]``; that exact integer is what is
returned, after checking it against the floating-point formula.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exceptions import NonIntegerDegree, ParallelLines, PointNotOnLine
from .flat_torus import AffineLine, Brane, Generator, check_transverse, cross, intersect

INTEGRALITY_TOL = 1e-9


def _normalized(d) -> tuple:
    u, v = int(d[0]), int(d[1])
    if u < 0 or (u == 0 and v < 0):
        u, v = -u, -v
    return u, v


def phase(d) -> float:
    """Canonical phase ``phi(d)`` in ``(-1/2, 1/2]``."""
    u, v = _normalized(d)
    if u == 0:
        return 0.5
    return math.atan(-v / u) / math.pi


def phase_key(d) -> tuple:
    """Exact sort key with ``phase_key(a) < phase_key(b)`` iff ``phase(a) < phase(b)``."""
    u, v = _normalized(d)
    if u == 0:
        return (1, Fraction(0))
    return (0, Fraction(-v, u))


def _check_not_parallel(d0, d1):
    if cross(d0, d1) == 0:
        raise ParallelLines(f"{tuple(d0)} and {tuple(d1)} are parallel")


def clockwise_gap(d0, d1) -> float:
    """The ``Delta`` in ``(0, 1)`` with ``exp(-i pi Delta) span(d0) = span(d1)``."""
    _check_not_parallel(d0, d1)
    gap = phase(d1) - phase(d0)
    return gap + 1.0 if phase_key(d1) < phase_key(d0) else gap


def gap_wraps(d0, d1) -> bool:
    """Exact: whether the clockwise gap from ``d0`` to ``d1`` passes the phase cut."""
    _check_not_parallel(d0, d1)
    return phase_key(d1) < phase_key(d0)


def grading_lift(line: AffineLine, alpha_shift: int = 0) -> float:
    return -phase(line.direction) + alpha_shift


def factor_degree(l0: AffineLine, s0: int, l1: AffineLine, s1: int) -> int:
    exact = s1 - s0 + (1 if gap_wraps(l0.direction, l1.direction) else 0)
    approx = grading_lift(l1, s1) - grading_lift(l0, s0) + clockwise_gap(l0.direction, l1.direction)
    if abs(approx - round(approx)) > INTEGRALITY_TOL or round(approx) != exact:
        raise NonIntegerDegree(f"degree {approx!r} disagrees with exact value {exact}")
    return exact


def brane_degree(b0: Brane, b1: Brane) -> int:
    """Degree shared by every intersection point of ``b0`` and ``b1``."""
    check_transverse(b0, b1)
    return sum(
        factor_degree(l0, a0, l1, a1)
        for l0, a0, l1, a1 in zip(b0.lines, b0.alpha_shift, b1.lines, b1.alpha_shift)
    )


def degree(b0: Brane, b1: Brane, g: Generator) -> int:
    """``deg(b0, b1; g)``."""
    check_transverse(b0, b1)
    for j, p in enumerate(g.point):
        if not (b0.lines[j].contains(p) and b1.lines[j].contains(p)):
            raise PointNotOnLine(f"generator {g.coords} is not an intersection point of the branes")
    return brane_degree(b0, b1)


def serre_pair(b0: Brane, b1: Brane, g: Generator) -> tuple:
    """``(deg(b0, b1; g), deg(b1, b0; g))``; the two always sum to ``n``."""
    d01 = degree(b0, b1, g)
    d10 = degree(b1, b0, g)
    if d01 + d10 != b0.n:
        raise NonIntegerDegree(f"Serre pair {(d01, d10)} does not sum to n = {b0.n}")
    return d01, d10


def expected_dimension(output_degree: int, input_degrees, k: int | None = None) -> int:
    """Dimension of the moduli of ``(k+1)``-gons: ``i_0 - sum i_j + k - 2``."""
    input_degrees = list(input_degrees)
    if k is None:
        k = len(input_degrees)
    if k < 1 or len(input_degrees) != k:
        raise ValueError("need k >= 1 input degrees")
    return output_degree - sum(input_degrees) + k - 2


def hom_space(b0: Brane, b1: Brane) -> dict:
    """Generators of ``CF*(b0, b1)`` bucketed by degree."""
    out: dict = {}
    for g in intersect(b0, b1):
        out.setdefault(g.degree, []).append(g)
    return out


def hom_space_dict(b0: Brane, b1: Brane) -> dict:
    """JSON-ready form of :func:`hom_space`."""
    space = hom_space(b0, b1)
    gens = [g.to_dict() for d in sorted(space) for g in space[d]]
    return {"generators": gens, "counts_by_degree": {str(d): len(space[d]) for d in sorted(space)}}


def grading_table(n: int, k_range=range(-3, 4)) -> list:
    """Degrees of ``(l_{k0}^n, l_{k1}^n)`` with the default lifts ``-phi``.

    Returns rows ``(k0, k1, degree)`` for all ``k0 != k1`` in ``k_range``.
    """
    rows = []
    for k0 in k_range:
        for k1 in k_range:
            if k0 == k1:
                continue
            b0 = Brane.slope((k0,) * n)
            b1 = Brane.slope((k1,) * n)
            g = intersect(b0, b1)[0]
            rows.append((k0, k1, degree(b0, b1, g)))
    return rows
