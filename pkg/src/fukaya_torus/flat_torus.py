"""Flat symplectic tori, affine-linear Lagrangian branes and their intersections.

Everything in this module is exact: coordinates, offsets, arc parameters and
holonomies are :class:`fractions.Fraction`.  The only real-valued data are the
per-factor areas and B-field coefficients of :class:`TorusAmbient`, which never
enter the geometry.

Coordinates on each ``T^2`` factor are ``(r, theta)`` with ``omega = A dr^dtheta``
and the complex coordinate ``r + i theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from numbers import Rational, Real
from typing import Sequence

from .exceptions import InputParseError, ParallelLines, PointNotOnLine

Point = tuple  # (Fraction, Fraction)


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: offsets and holonomies must be rational so that the
    congruences solved below stay exact.
    """
    if isinstance(value, bool):
        raise InputParseError(f"expected a rational, got {value!r}")
    if isinstance(value, (int, Fraction)) or isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputParseError(f"cannot parse rational {value!r}") from exc
    raise InputParseError(f"expected a rational (int or 'p/q' string), got {value!r}")


def mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


def reduce_point(p) -> Point:
    return (mod1(Fraction(p[0])), mod1(Fraction(p[1])))


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def is_integer(x: Fraction) -> bool:
    return Fraction(x).denominator == 1


def _bezout(u: int, v: int) -> tuple[int, int]:
    """Return ``(a, b)`` with ``a*u + b*v == gcd(u, v)``."""
    old_r, r = u, v
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


@dataclass(frozen=True)
class TorusAmbient:
    """``(T^{2n}, omega, B)`` with ``omega = sum A_j dr_j^dtheta_j`` and diagonal ``B``.

    Parameters
    ----------
    area : sequence of positive reals
        Per-factor symplectic areas ``A_j``.
    b : sequence of reals
        Per-factor B-field coefficients ``b_j``.
    """

    area: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "area", tuple(self.area))
        object.__setattr__(self, "b", tuple(self.b))
        if len(self.area) == 0 or len(self.area) != len(self.b):
            raise InputParseError("area and b must be non-empty and of equal length")
        for a in self.area:
            if not isinstance(a, Real) or not a > 0:
                raise InputParseError(f"areas must be positive reals, got {a!r}")

    @property
    def n(self) -> int:
        return len(self.area)

    @property
    def tau(self) -> tuple:
        return tuple(complex(float(bj), float(aj)) for aj, bj in zip(self.area, self.b))

    @classmethod
    def standard(cls, n: int = 1, b=0.0, area=1.0) -> "TorusAmbient":
        return cls(area=(area,) * n, b=(b,) * n)

    def to_dict(self) -> dict:
        return {"n": self.n, "area": [float(a) for a in self.area], "b": [float(x) for x in self.b]}

    @classmethod
    def from_dict(cls, data: dict) -> "TorusAmbient":
        try:
            area = [float(a) for a in data["area"]]
            b = [float(x) for x in data["b"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputParseError(f"ambient: {exc}") from exc
        if "n" in data and int(data["n"]) != len(area):
            raise InputParseError("ambient: n does not match len(area)")
        return cls(area=area, b=b)


@dataclass(frozen=True)
class AffineLine:
    """The circle ``{c + s d : s in R}`` in ``T^2 = R^2 / Z^2``.

    The sign of ``direction`` is the orientation: the arc parameter ``s``
    increases along ``direction``, and one trip around the circle is ``ds = 1``.
    """

    direction: tuple
    offset: tuple = (Fraction(0), Fraction(0))

    def __post_init__(self):
        u, v = (int(x) for x in self.direction)
        if (u, v) == (0, 0) or math.gcd(u, v) != 1:
            raise InputParseError(f"direction {self.direction!r} is not primitive")
        object.__setattr__(self, "direction", (u, v))
        object.__setattr__(self, "offset", reduce_point(tuple(as_fraction(c) for c in self.offset)))

    @classmethod
    def slope(cls, k: int, offset=(0, 0)) -> "AffineLine":
        """``l_k = {theta = -k r}`` shifted by ``offset``; direction ``(1, -k)``."""
        return cls((1, -k), offset)

    @property
    def partner(self) -> tuple:
        """Integer vector ``e`` with ``cross(d, e) == 1`` (so ``{d, e}`` is a Z-basis)."""
        u, v = self.direction
        a, b = _bezout(u, v)
        return (-b, a)

    def is_parallel(self, other: "AffineLine") -> bool:
        return cross(self.direction, other.direction) == 0

    def contains(self, point) -> bool:
        """True if ``point`` (on the torus or in the cover) lies on the circle."""
        w = (Fraction(point[0]) - self.offset[0], Fraction(point[1]) - self.offset[1])
        return is_integer(cross(self.direction, w))

    def torus_parameter(self, point) -> Fraction:
        """Arc parameter of a point of the circle, reduced to ``[0, 1)``."""
        w = (Fraction(point[0]) - self.offset[0], Fraction(point[1]) - self.offset[1])
        if not is_integer(cross(self.direction, w)):
            raise PointNotOnLine(f"{point} is not on {self}")
        return mod1(cross(w, self.partner))

    def point_at(self, s, base=None) -> Point:
        c = self.offset if base is None else base
        d = self.direction
        return (c[0] + s * d[0], c[1] + s * d[1])

    def to_dict(self) -> dict:
        return {"d": list(self.direction), "c": [str(x) for x in self.offset]}

    @classmethod
    def from_dict(cls, data: dict) -> "AffineLine":
        try:
            d = data["d"]
            c = data.get("c", ["0", "0"])
            if len(d) != 2 or len(c) != 2:
                raise InputParseError("line: 'd' and 'c' need two entries")
            if any(isinstance(x, float) for x in d):
                raise InputParseError("line: direction entries must be integers")
            return cls(tuple(int(x) for x in d), tuple(as_fraction(x) for x in c))
        except (KeyError, TypeError) as exc:
            raise InputParseError(f"line: {exc}") from exc


def arc_parameter(line: AffineLine, lifted_point, base=None) -> Fraction:
    """Return ``s`` with ``lifted_point == base + s * d``.

    ``base`` defaults to the line's offset, i.e. the lift of the line through the
    offset point.  Points on other lifts raise :class:`PointNotOnLine`.
    """
    c = line.offset if base is None else tuple(Fraction(x) for x in base)
    d = line.direction
    w = (Fraction(lifted_point[0]) - c[0], Fraction(lifted_point[1]) - c[1])
    if cross(d, w) != 0:
        raise PointNotOnLine(f"{lifted_point} is not on the lift of {line} through {c}")
    return w[0] / d[0] if d[0] != 0 else w[1] / d[1]


def intersect_lines(l0: AffineLine, l1: AffineLine) -> list:
    """Transverse intersection points of two circles in ``T^2``, sorted.

    Points ``c0 + s d0`` lie on ``l1`` iff ``cross(d1, c0 - c1) + s cross(d1, d0)``
    is an integer, which pins ``s`` modulo ``1/|det|``.
    """
    det = cross(l0.direction, l1.direction)
    if det == 0:
        raise ParallelLines(f"{l0.direction} and {l1.direction} are parallel")
    c0, c1 = l0.offset, l1.offset
    k = cross(l1.direction, (c0[0] - c1[0], c0[1] - c1[1]))
    # integer arithmetic over a common denominator; distinct s in [0, 1) give distinct points
    den = math.lcm(k.denominator, c0[0].denominator, c0[1].denominator)
    big = den * abs(det)
    sign = -1 if det > 0 else 1
    kn = k.numerator * (den // k.denominator)
    x0, y0 = c0[0].numerator * (big // c0[0].denominator), c0[1].numerator * (big // c0[1].denominator)
    dx, dy = l0.direction
    pts = []
    for j in range(abs(det)):
        sn = sign * (j * den - kn)  # s = sn / big
        pts.append((Fraction((x0 + sn * dx) % big, big), Fraction((y0 + sn * dy) % big, big)))
    pts.sort()
    return pts


@dataclass(frozen=True)
class Brane:
    """A product of affine circles with grading shift and flat U(1) holonomy per factor.

    With diagonal ``B`` the restriction of ``B`` to every circle factor vanishes,
    so the connection is flat with holonomy ``exp(2 pi i beta_j)`` around the
    ``j``-th circle (traversed along ``direction``).  ``beta_j`` is kept as
    given rather than reduced mod 1: it fixes the constant connection form
    ``2 pi i beta_j ds`` and hence the canonical unit frames at generators.
    ``beta`` and ``beta + 1`` are gauge equivalent, but their frames differ
    by ``exp(2 pi i s)``, so structure-map coefficients differ by that phase.
    """

    lines: tuple
    alpha_shift: tuple = None
    holonomy: tuple = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        lines = tuple(self.lines)
        if not lines:
            raise InputParseError("a brane needs at least one line")
        n = len(lines)
        shifts = (0,) * n if self.alpha_shift is None else tuple(int(a) for a in self.alpha_shift)
        hol = (Fraction(0),) * n if self.holonomy is None else tuple(as_fraction(h) for h in self.holonomy)
        if len(shifts) != n or len(hol) != n:
            raise InputParseError("alpha_shift and holonomy must have one entry per factor")
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "alpha_shift", shifts)
        object.__setattr__(self, "holonomy", hol)

    @property
    def n(self) -> int:
        return len(self.lines)

    @classmethod
    def slope(cls, ks, offsets=None, alpha_shift=None, holonomy=None, label="") -> "Brane":
        """Product of ``l_{k_j}`` lines (``ks`` may be a single int for ``n = 1``)."""
        if isinstance(ks, int):
            ks = (ks,)
        offsets = [(0, 0)] * len(ks) if offsets is None else offsets
        lines = tuple(AffineLine.slope(k, c) for k, c in zip(ks, offsets))
        return cls(lines, alpha_shift, holonomy, label)

    def replace(self, **changes) -> "Brane":
        data = dict(lines=self.lines, alpha_shift=self.alpha_shift, holonomy=self.holonomy, label=self.label)
        data.update(changes)
        return Brane(**data)

    def to_dict(self) -> dict:
        return {
            "lines": [ln.to_dict() for ln in self.lines],
            "alpha_shift": list(self.alpha_shift),
            "holonomy": [str(h) for h in self.holonomy],
        }

    @classmethod
    def from_dict(cls, data: dict, label: str = "") -> "Brane":
        if not isinstance(data, dict) or "lines" not in data:
            raise InputParseError("brane: expected an object with a 'lines' array")
        lines = tuple(AffineLine.from_dict(ln) for ln in data["lines"])
        return cls(lines, data.get("alpha_shift"), data.get("holonomy"), label or str(data.get("label", "")))


@dataclass(frozen=True, order=True)
class Generator:
    """A transverse intersection point of two branes, with its Maslov degree."""

    point: tuple
    degree: int = 0
    pair: tuple = field(default=(), compare=False)

    @property
    def coords(self) -> tuple:
        return tuple(x for p in self.point for x in p)

    def to_dict(self) -> dict:
        return {"point": [str(x) for x in self.coords], "degree": self.degree}


def check_transverse(b0: Brane, b1: Brane) -> None:
    if b0.n != b1.n:
        raise InputParseError("branes live on tori of different dimension")
    for j, (l0, l1) in enumerate(zip(b0.lines, b1.lines)):
        if l0.is_parallel(l1):
            raise ParallelLines(f"factor {j}: directions {l0.direction} and {l1.direction} are parallel")


def intersect(b0: Brane, b1: Brane) -> list:
    """All generators of ``CF(b0, b1)``: products of per-factor intersection points.

    Every generator of a given pair has the same degree (the tangent planes are
    constant), so the degree is computed once.
    """
    from .grading import brane_degree

    check_transverse(b0, b1)
    per_factor = [intersect_lines(l0, l1) for l0, l1 in zip(b0.lines, b1.lines)]
    deg = brane_degree(b0, b1)
    pair = (b0.label, b1.label)
    return [Generator(tuple(pts), deg, pair) for pts in product(*per_factor)]


def parse_branes(data) -> list:
    """Accept ``[brane, ...]`` or ``{"branes": [...]}``."""
    if isinstance(data, dict) and "branes" in data:
        data = data["branes"]
    if not isinstance(data, list):
        raise InputParseError("expected a list of branes")
    out = []
    for i, item in enumerate(data):
        try:
            out.append(Brane.from_dict(item, label=f"L{i}"))
        except InputParseError as exc:
            raise InputParseError(f"branes[{i}]: {exc}") from exc
    return out


def generic_offsets(count: int, seed: int = 0, denominator: int = 97) -> list:
    """Deterministic 'generic' rational offsets, handy for demos and tests."""
    import random

    rng = random.Random(seed)
    return [
        (Fraction(rng.randrange(denominator), denominator), Fraction(rng.randrange(denominator), denominator))
        for _ in range(count)
    ]


def lines_in_general_position(lines: Sequence[AffineLine]) -> bool:
    """No three of the lines pass through a common point of the torus."""
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            if lines[i].is_parallel(lines[j]):
                continue
            for p in intersect_lines(lines[i], lines[j]):
                for k in range(len(lines)):
                    if k not in (i, j) and lines[k].contains(p):
                        return False
    return True
