"""Independent reference computations used by the tests.

Nothing here imports the engine's geometry; lines are plain ``(direction,
offset)`` pairs of Fractions and the triangle search walks lifted lines
directly.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np


def _frac_mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _pt_mod1(p):
    return (_frac_mod1(p[0]), _frac_mod1(p[1]))


def _det(a, b):
    return a[0] * b[1] - a[1] * b[0]


def grid_intersections(d0, c0, d1, c1):
    """Intersection points of two circles on ``T^2`` by scanning a 1D grid along the first.

    Membership of the second circle means ``cross(d1, c0 - c1 + s d0)`` is an
    integer, so every hit sits at ``s = j / N`` with ``N = |det| * den(base)``
    where ``base = cross(d1, c0 - c1)``; all ``N`` grid values are tested with
    integer arithmetic.
    """
    det = _det(d1, d0)
    base = Fraction(_det(d1, (c0[0] - c1[0], c0[1] - c1[1])))
    n = abs(det) * base.denominator
    scale = base.denominator * n
    j = np.arange(n, dtype=np.int64)
    num = base.numerator * n + j * det * base.denominator
    hits = j[num % scale == 0]
    pts = {_pt_mod1((c0[0] + Fraction(int(h), n) * d0[0], c0[1] + Fraction(int(h), n) * d0[1])) for h in hits}
    return sorted(pts)


def brute_mu2(lines, holonomy, p1, p2, outputs, tau, rho=(1.0, 1.0), window=100):
    """``mu^2`` on one ``T^2`` by walking lifted lines.

    Parameters
    ----------
    lines : three ``(direction, offset)`` pairs for ``L_0, L_1, L_2``.
    holonomy : three rationals ``beta_j`` (transport over +1 period of ``L_j``
        multiplies by ``exp(2 pi i beta_j)``).
    p1, p2 : input corners in ``L_0 & L_1`` and ``L_1 & L_2``.
    outputs : the points of ``L_2 & L_0``.
    tau : complex ``b + i A``.

    Triangles ``P0 -> P1 -> P2`` with ``P1`` fixed, ``P2 = P1 + t d_1`` for
    every lift ``t`` of ``p2`` with ``|t| <= window``, and ``P0`` where the
    lifts of ``L_2`` through ``P2`` and ``L_0`` through ``P1`` meet.  Only
    counterclockwise triangles count.
    """
    (d0, _), (d1, c1), (d2, _) = lines
    P1 = tuple(Fraction(x) for x in p1)
    # t0 with P1 + t0 d1 = p2 mod Z^2: solve along the line through P1
    w = (Fraction(p2[0]) - P1[0], Fraction(p2[1]) - P1[1])
    # cross(d1, w) is an integer; choose e with det(d1, e) = 1, then t0 = det(w, e) mod 1
    e = _partner(d1)
    t0 = _frac_mod1(Fraction(_det(w, e)))
    out = {tuple(o): 0j for o in outputs}
    terms = {tuple(o): [] for o in outputs}
    for m in range(-window, window + 1):
        t = t0 + m
        P2 = (P1[0] + t * d1[0], P1[1] + t * d1[1])
        den = _det(d2, d0)
        # P2 + u d2 = P1 + v d0
        u = _det((P1[0] - P2[0], P1[1] - P2[1]), d0) / den
        P0 = (P2[0] + u * d2[0], P2[1] + u * d2[1])
        key = _pt_mod1(P0)
        if key not in out:
            continue
        signed = (_det(P0, P1) + _det(P1, P2) + _det(P2, P0)) / 2
        if signed <= 0:
            continue
        s0 = _arc(d0, P0, P1)
        s1 = _arc(d1, P1, P2)
        s2 = _arc(d2, P2, P0)
        hol = holonomy[0] * s0 + holonomy[1] * s1 + holonomy[2] * s2
        # exponent split so that large areas do not lose the phase
        area = float(signed)
        phase = math.fmod(tau.real * area, 1.0) + float(_frac_mod1(Fraction(hol)))
        terms[key].append(math.exp(-2 * math.pi * tau.imag * area) * cmath.exp(2j * math.pi * phase) * rho[0] * rho[1])
    for key, ts in terms.items():
        out[key] = complex(math.fsum(z.real for z in ts), math.fsum(z.imag for z in ts))
    return out


def _arc(d, a, b):
    w = (b[0] - a[0], b[1] - a[1])
    assert _det(d, w) == 0
    return w[0] / d[0] if d[0] else w[1] / d[1]


def _partner(d):
    """Integer ``e`` with ``det(d, e) = 1``."""
    u, v = d
    for x in range(-abs(v) - 1, abs(v) + 2):
        for y in range(-abs(u) - 1, abs(u) + 2):
            if u * y - v * x == 1:
                return (x, y)
    raise ValueError(d)

