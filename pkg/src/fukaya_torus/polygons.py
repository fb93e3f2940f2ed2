"""Homotopy classes of boundary-punctured polygons on affine branes.

A class of ``(k+1)``-gons with boundary on ``L_0, ..., L_k`` and corners
``p_0, ..., p_k`` (``p_j`` in ``L_{j-1} & L_j``, ``p_0`` in ``L_k & L_0``) is
determined, in each ``T^2`` factor, by a closed chain of lifted corners in the
universal cover::

    p~_1  --L_1-->  p~_2  --L_2-->  ...  p~_k  --L_k-->  p~_0  --L_0-->  p~_1

Fixing the lift of ``p_1``, the lift of ``p_{j+1}`` along the lift of ``L_j``
through ``p~_j`` is free up to an integer (the *lift index* ``m_{j+1}``), and
``p~_0`` is forced as the meeting point of the lifts of ``L_k`` and ``L_0``.
A lift-index tuple is a class iff that meeting point projects to ``p_0``.

Corners are stored in the order ``p~_0, p~_1, ..., p~_k``; boundary arc ``j``
runs from ``p~_j`` to ``p~_{j+1}`` along ``L_j``.  Holomorphic polygons map
the disc orientation-preservingly, so a class carries one iff its lifted
polygon is convex and counterclockwise in the ``(r, theta)`` plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .exceptions import DegenerateClass, CutoffTooSmall, ParallelLines
from .flat_torus import AffineLine, cross, is_integer, mod1, reduce_point


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _scale(s, d):
    return (s * d[0], s * d[1])


@dataclass(frozen=True)
class AreaQuadratic:
    """``area(j) = a j^2 + b j + c`` over the integers ``j`` (exact coefficients)."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __call__(self, j) -> Fraction:
        return self.a * j * j + self.b * j + self.c

    def vertex(self) -> Fraction:
        return -self.b / (2 * self.a)

    def window(self, cutoff) -> range:
        """Integers ``j`` with ``area(j) <= cutoff`` (exact; requires ``a > 0``)."""
        cutoff = Fraction(cutoff)
        disc = self.b * self.b - 4 * self.a * (self.c - cutoff)
        if disc < 0:
            return range(0)
        root = math.sqrt(float(disc))
        lo = math.floor((-float(self.b) - root) / (2 * float(self.a))) - 1
        hi = math.ceil((-float(self.b) + root) / (2 * float(self.a))) + 1
        while lo <= hi and self(lo) > cutoff:
            lo += 1
        while hi >= lo and self(hi) > cutoff:
            hi -= 1
        return range(lo, hi + 1)


@dataclass(frozen=True)
class FactorPolygon:
    """Lifted closed polygon in one ``T^2`` factor."""

    corners: tuple  # p~_0, p~_1, ..., p~_k
    lift_indices: tuple  # m_2, ..., m_k

    def translated(self, vec) -> "FactorPolygon":
        return FactorPolygon(tuple(_add(p, vec) for p in self.corners), self.lift_indices)


@dataclass(frozen=True)
class PolygonClass:
    """A homotopy class of ``(k+1)``-gons, one lifted polygon per torus factor."""

    lines: tuple  # lines[f][j] : AffineLine of brane j in factor f
    factors: tuple  # FactorPolygon per factor

    @property
    def k(self) -> int:
        return len(self.factors[0].corners) - 1

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def lift_indices(self) -> tuple:
        return tuple(fp.lift_indices for fp in self.factors)

    def key(self) -> tuple:
        """Translation-invariant identity: corners relative to ``p~_1``, per factor."""
        out = []
        for fp in self.factors:
            base = fp.corners[1]
            out.append(tuple(_sub(p, base) for p in fp.corners) + (reduce_point(base),))
        return tuple(out)

    def reversed(self) -> "PolygonClass":
        """The same corners traversed in the opposite order (orientation flip)."""
        factors = tuple(FactorPolygon(tuple(reversed(fp.corners)), fp.lift_indices) for fp in self.factors)
        lines = tuple(tuple(reversed(ls[:-1])) + (ls[-1],) for ls in self.lines)
        return PolygonClass(lines, factors)

    def to_dict(self) -> dict:
        geom = None
        try:
            geom = class_geometry(self)
        except DegenerateClass:
            pass
        return {
            "lift_indices": [list(m) for m in self.lift_indices],
            "corners": [[[str(x) for x in p] for p in fp.corners] for fp in self.factors],
            "area": [str(a) for a in geom.euclidean_area] if geom else None,
            "verdict": holomorphic_count(self),
        }


@dataclass(frozen=True)
class ClassGeometry:
    euclidean_area: tuple  # per factor, exact
    signed_area: tuple  # per factor, exact (positive = counterclockwise)
    arc_displacement: tuple  # arc_displacement[j][f]: periods of L_j travelled along arc j
    convex_ccw: bool


def _shoelace(pts) -> Fraction:
    total = Fraction(0)
    for i in range(len(pts)):
        total += cross(pts[i], pts[(i + 1) % len(pts)])
    return total / 2


def _fan_area(pts) -> Fraction:
    total = Fraction(0)
    for i in range(1, len(pts) - 1):
        total += cross(_sub(pts[i], pts[0]), _sub(pts[i + 1], pts[0])) / 2
    return total


def _displacement(line: AffineLine, a, b) -> Fraction:
    w = _sub(b, a)
    d = line.direction
    if cross(d, w) != 0:
        raise DegenerateClass(f"arc from {a} to {b} does not follow direction {d}")
    return w[0] / d[0] if d[0] != 0 else w[1] / d[1]


def _factor_convex_ccw(pts) -> bool:
    m = len(pts)
    edges = [_sub(pts[(i + 1) % m], pts[i]) for i in range(m)]
    if any(e == (0, 0) for e in edges):
        return False
    turning = 0.0
    for i in range(m):
        e0, e1 = edges[i - 1], edges[i]
        c = cross(e0, e1)
        if c <= 0:
            return False
        turning += math.atan2(float(c), float(e0[0] * e1[0] + e0[1] * e1[1]))
    return round(turning / (2 * math.pi)) == 1


def class_geometry(c: PolygonClass) -> ClassGeometry:
    """Exact areas, arc displacements and the convex/counterclockwise verdict."""
    signed, areas = [], []
    for fp in c.factors:
        s = _shoelace(fp.corners)
        if s != _fan_area(fp.corners):
            raise AssertionError("shoelace and fan decompositions disagree")
        if s == 0:
            raise DegenerateClass(f"zero-area polygon {fp.corners}")
        signed.append(s)
        areas.append(abs(s))
    k = c.k
    arcs = []
    for j in range(k + 1):
        per_factor = []
        for f, fp in enumerate(c.factors):
            a, b = fp.corners[j], fp.corners[(j + 1) % (k + 1)]
            per_factor.append(_displacement(c.lines[f][j], a, b))
        arcs.append(tuple(per_factor))
    verdict = all(_factor_convex_ccw(fp.corners) for fp in c.factors)
    return ClassGeometry(tuple(areas), tuple(signed), tuple(arcs), verdict)


def holomorphic_count(c: PolygonClass) -> int:
    """1 iff every factor polygon is embedded, convex and counterclockwise."""
    if c.k < 2:
        return 0
    return int(all(_factor_convex_ccw(fp.corners) for fp in c.factors))


def _step_offset(line: AffineLine, start, target) -> Fraction:
    """``s0`` in [0, 1) with ``start + s0 d`` congruent to ``target`` mod ``Z^2``."""
    w = _sub(target, start)
    if not is_integer(cross(line.direction, w)):
        raise DegenerateClass(f"{target} is not on the circle through {start}")
    return mod1(cross(w, line.partner))


def _meet(p, d, q, e):
    """Intersection in the plane of ``p + s d`` and ``q + t e``."""
    den = cross(d, e)
    s = cross(_sub(q, p), e) / den
    return _add(p, _scale(s, d))


class _FactorProblem:
    """Lines and corners of one factor; shared by enumeration and tail bounds."""

    def __init__(self, lines, corners, base_shift=(0, 0)):
        self.lines = tuple(lines)  # L_0..L_k
        self.corners = tuple(reduce_point(p) for p in corners)  # g_0..g_k
        self.k = len(lines) - 1
        if self.k >= 2 and all(p == self.corners[0] for p in self.corners):
            raise DegenerateClass(f"all corners coincide at {self.corners[0]}; perturb the offsets")
        self.base = _add(self.corners[1], base_shift)

    def chain(self, ts):
        """Corners p~_1..p~_k for arc parameters ``ts[j-1]`` along ``L_j``, j = 1..k-1."""
        pts = [self.base]
        for j, t in enumerate(ts, start=1):
            pts.append(_add(pts[-1], _scale(t, self.lines[j].direction)))
        return pts

    def close(self, pts):
        d0, dk = self.lines[0].direction, self.lines[self.k].direction
        if cross(d0, dk) == 0:
            return None
        p0 = _meet(pts[0], d0, pts[-1], dk)
        if reduce_point(p0) != self.corners[0]:
            return None
        return p0

    def offsets_for(self, ms):
        """Arc parameters for lift indices ``ms`` (m_2..m_k)."""
        pts = [self.base]
        ts = []
        for j, m in enumerate(ms, start=1):
            s0 = _step_offset(self.lines[j], pts[-1], self.corners[j + 1])
            t = s0 + m
            ts.append(t)
            pts.append(_add(pts[-1], _scale(t, self.lines[j].direction)))
        return ts, pts

    def polygon(self, ms):
        ts, pts = self.offsets_for(ms)
        p0 = self.close(pts)
        if p0 is None:
            return None
        return FactorPolygon((p0,) + tuple(pts), tuple(ms))

    # k = 2: one free index, area exactly quadratic in it.
    def triangle_family(self):
        """``(m_star, period, AreaQuadratic)`` for k = 2, or ``None`` if no class closes."""
        d0, d1, d2 = (ln.direction for ln in self.lines)
        if cross(d2, d0) == 0:
            return None
        s0 = _step_offset(self.lines[1], self.base, self.corners[2])
        ratio = Fraction(cross(d2, d1), cross(d2, d0))
        period = ratio.denominator
        kappa = abs(Fraction(cross(d2, d1) * cross(d0, d1), 2 * cross(d2, d0)))
        for m in range(period):
            if self.polygon((m,)) is not None:
                t0 = s0 + m
                quad = AreaQuadratic(kappa * period * period, 2 * kappa * period * t0, kappa * t0 * t0)
                return m, period, quad
        return None

    def length_bound(self, cutoff) -> Fraction:
        """Upper bound on every edge length of a convex closed polygon of area <= cutoff."""
        dirs = [ln.direction for ln in self.lines]
        norms = [math.hypot(*d) for d in dirs]
        sines = [
            abs(cross(dirs[i], dirs[j])) / (norms[i] * norms[j])
            for i in range(len(dirs))
            for j in range(len(dirs))
            if cross(dirs[i], dirs[j]) != 0
        ]
        s_min = min(sines)
        bound = math.sqrt(2 * self.k * float(cutoff) / s_min)
        h_min = self._parallel_gap()
        if h_min is not None:
            bound = max(bound, 2 * float(cutoff) / h_min)
        return bound

    def _parallel_gap(self):
        """Least positive distance between distinct parallel lifts of two of the lines."""
        best = None
        for i, li in enumerate(self.lines):
            for lj in self.lines[i + 1:]:
                if cross(li.direction, lj.direction) != 0:
                    continue
                d = li.direction
                delta = mod1(cross(d, lj.offset) - cross(d, li.offset))
                gaps = [x for x in (delta, 1 - delta, Fraction(1)) if x > 0]
                h = float(min(gaps)) / math.hypot(*d)
                best = h if best is None else min(best, h)
        return best

    def enumerate(self, cutoff):
        cutoff = Fraction(cutoff)
        if self.k < 2:
            # Two straight lines meet once in the plane: no bigons, and k = 1 closes
            # only onto a degenerate point.
            return []
        if self.k == 2:
            fam = self.triangle_family()
            if fam is None:
                return []
            m_star, period, quad = fam
            out = []
            for j in quad.window(cutoff):
                fp = self.polygon((m_star + period * j,))
                if fp is not None and _shoelace(fp.corners) != 0:
                    out.append(fp)
            return out
        bound = self.length_bound(cutoff)
        ranges = []
        for j in range(1, self.k):
            reach = bound / math.hypot(*self.lines[j].direction)
            ranges.append(range(math.floor(-reach) - 1, math.ceil(reach) + 1))
        out = []
        for ms in product(*ranges):
            fp = self.polygon(ms)
            if fp is None:
                continue
            area = abs(_shoelace(fp.corners))
            if 0 < area <= cutoff:
                out.append(fp)
        return out


def _factor_problems(branes, corners, base_shift=None):
    """``branes = [b_0..b_k]``, ``corners = [g_0..g_k]`` (Generators or point tuples)."""
    k = len(branes) - 1
    if k < 1:
        raise ValueError("need at least two branes")
    if len(corners) != k + 1:
        raise ValueError("need one corner per brane")
    n = branes[0].n
    for j in range(k + 1):
        a, b = branes[j - 1], branes[j]
        for f in range(n):
            if a.lines[f].is_parallel(b.lines[f]):
                raise ParallelLines(f"branes {j - 1} and {j} are parallel in factor {f}")
    pts = [g.point if hasattr(g, "point") else g for g in corners]
    shift = base_shift or [(0, 0)] * n
    return [
        _FactorProblem([b.lines[f] for b in branes], [p[f] for p in pts], shift[f])
        for f in range(n)
    ]


def enumerate_classes(branes, inputs, output, area_cutoff, area_weights=None, base_shift=None, strict=False):
    """All closed classes with weighted area ``sum_f A_f area_f <= area_cutoff``.

    Parameters
    ----------
    branes : list of Brane
        ``b_0, ..., b_k``.
    inputs : list
        Corner generators ``g_1, ..., g_k`` (``g_j`` in ``b_{j-1} & b_j``).
    output : Generator
        ``g_0`` in ``b_k & b_0``.
    area_cutoff : rational
        Cutoff on the weighted area.
    area_weights : sequence, optional
        Per-factor ``A_f`` (default all 1).
    base_shift : sequence of integer vectors, optional
        Lattice translation of the fixed lift of ``g_1`` in each factor.

    For ``k = 2`` the window per factor is solved exactly from the area
    quadratic; for ``k >= 3`` it comes from a convex-polygon edge-length bound,
    so every class that can carry a holomorphic polygon is found.  Results are
    sorted by lift indices.
    """
    problems = _factor_problems(branes, [output] + list(inputs), base_shift)
    weights = [Fraction(1)] * len(problems) if area_weights is None else [Fraction(w) for w in area_weights]
    cutoff = Fraction(area_cutoff)
    if cutoff <= 0:
        return []
    per_factor = []
    for prob, w in zip(problems, weights):
        fps = [(fp, abs(_shoelace(fp.corners))) for fp in prob.enumerate(cutoff / w)]
        per_factor.append(fps)
    lines = tuple(tuple(prob.lines) for prob in problems)
    out = []
    for combo in product(*per_factor):
        if sum(w * a for w, (_, a) in zip(weights, combo)) <= cutoff:
            out.append(PolygonClass(lines, tuple(fp for fp, _ in combo)))
    out.sort(key=lambda c: c.lift_indices)
    if strict and not out:
        raise CutoffTooSmall(f"no closed class with area <= {area_cutoff}")
    return out


def triangle_families(branes, inputs, output):
    """Per-factor ``AreaQuadratic`` of the (unique) k = 2 family, or None if empty."""
    if len(branes) != 3:
        raise ValueError("triangle families exist for k = 2 only")
    problems = _factor_problems(branes, [output] + list(inputs))
    fams = [prob.triangle_family() for prob in problems]
    if any(f is None for f in fams):
        return None
    return [f[2] for f in fams]


def polygon_length_bounds(branes, inputs, output):
    """Per-factor helpers for tail bounds when k >= 3."""
    return _factor_problems(branes, [output] + list(inputs))


def make_class(lines_per_factor, corners_per_factor, lift_indices=None) -> PolygonClass:
    """Build a class directly from lifted corners ``p~_0..p~_k`` (tests, debugging)."""
    factors = []
    for f, pts in enumerate(corners_per_factor):
        pts = tuple((Fraction(p[0]), Fraction(p[1])) for p in pts)
        ms = tuple(lift_indices[f]) if lift_indices else ()
        factors.append(FactorPolygon(pts, ms))
    return PolygonClass(tuple(tuple(ls) for ls in lines_per_factor), tuple(factors))
