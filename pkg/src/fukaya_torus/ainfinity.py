"""Polygon weights, the structure maps mu^k and rigorous truncation bounds.

Every brane carries the trivial line bundle with a flat connection, so all
fibres are identified with ``C`` through canonical unit frames and morphisms
are complex scalars per generator.  Parallel transport over ``Delta s``
periods of a circle with holonomy ``beta`` multiplies by
``exp(2 pi i beta Delta s)``; a full positive loop gives ``exp(2 pi i beta)``.

The weight of a class is::

    prod_f exp(2 pi i tau_f area_f) * prod_{j,f} exp(2 pi i beta_{j,f} Delta s_{j,f}) * prod_j rho_j

Its modulus ``exp(-2 pi sum_f A_f area_f) * prod |rho_j|`` is computed from the
areas alone, so the B-field and the holonomies only ever touch the phase.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import mpmath

from .exceptions import (
    ConvergenceFailure,
    InputParseError,
    MismatchBeyondTolerance,
    NonContributingClass,
    NonPositiveLeadingCoefficient,
    ParallelLines,
)
from .flat_torus import Brane, TorusAmbient, check_transverse, intersect, mod1, reduce_point
from .grading import brane_degree
from .polygons import (
    AreaQuadratic,
    class_geometry,
    enumerate_classes,
    holomorphic_count,
    polygon_length_bounds,
    triangle_families,
)

TWO_PI = 2.0 * math.pi


@dataclass
class CFElement:
    """A morphism in ``CF(source, target)``: one complex coefficient per generator point.

    Coefficients are keyed by the generator's point (a tuple of per-factor
    rational points); missing keys are zero.
    """

    source: Brane
    target: Brane
    coeffs: dict = field(default_factory=dict)
    degree: int | None = None

    def __post_init__(self):
        check_transverse(self.source, self.target)
        points = {g.point for g in intersect(self.source, self.target)}
        clean = {}
        for key, value in self.coeffs.items():
            pt = key.point if hasattr(key, "point") else tuple(reduce_point(p) for p in key)
            if pt not in points:
                raise InputParseError(f"{pt} is not a generator of the brane pair")
            value = complex(value)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise InputParseError(f"non-finite coefficient at {pt}")
            clean[pt] = clean.get(pt, 0j) + value
        self.coeffs = clean
        if self.degree is None:
            self.degree = brane_degree(self.source, self.target)

    @classmethod
    def constant(cls, source: Brane, target: Brane, value=1.0) -> "CFElement":
        """Every generator with the same coefficient."""
        return cls(source, target, {g.point: value for g in intersect(source, target)})

    @classmethod
    def basis(cls, source: Brane, target: Brane, generator, value=1.0) -> "CFElement":
        return cls(source, target, {generator: value})

    def generators(self) -> list:
        return intersect(self.source, self.target)

    def __getitem__(self, key) -> complex:
        pt = key.point if hasattr(key, "point") else key
        return self.coeffs.get(pt, 0j)

    def scaled(self, factor) -> "CFElement":
        return CFElement(self.source, self.target, {p: factor * v for p, v in self.coeffs.items()}, self.degree)

    def max_abs_difference(self, other: "CFElement") -> float:
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def to_dict(self) -> dict:
        out = []
        for g in self.generators():
            v = self[g.point]
            out.append({"generator": [str(x) for x in g.coords], "coefficient": {"re": v.real, "im": v.imag}})
        return {"degree": self.degree, "output": out}


@dataclass(frozen=True)
class Weight:
    """A class weight together with the data it was built from."""

    value: complex
    areas: tuple  # exact per-factor Euclidean areas
    holonomy_exponent: Fraction  # sum_{j,f} beta_{j,f} Delta s_{j,f}, reduced mod 1
    input_product: complex
    real_exponent: float  # -2 pi sum_f A_f area_f
    modulus: float  # exp(real_exponent) * prod |rho_j|


def _real_exponent(areas, ambient: TorusAmbient) -> float:
    return -TWO_PI * math.fsum(float(a) * float(ar) for a, ar in zip(ambient.area, areas))


def _phase_turns(areas, hol, ambient: TorusAmbient) -> float:
    """Phase in turns: ``sum b_f area_f + hol``; each piece reduced mod 1 first."""
    b_part = math.fsum(math.fmod(float(b) * float(ar), 1.0) for b, ar in zip(ambient.b, areas))
    return math.fmod(b_part + float(hol), 1.0)


def _holonomy_exponent(geom, branes) -> Fraction:
    total = Fraction(0)
    for j, per_factor in enumerate(geom.arc_displacement):
        for f, ds in enumerate(per_factor):
            total += branes[j].holonomy[f] * ds
    return mod1(total)


def class_weight(c, inputs, branes, ambient: TorusAmbient, precision: int | None = None) -> Weight:
    """Weight of a contributing class for scalar inputs ``rho_1..rho_k``.

    Parameters
    ----------
    c : PolygonClass
    inputs : sequence of complex
        ``rho_1, ..., rho_k`` in canonical unit frames.
    branes : sequence of Brane
        ``b_0, ..., b_k`` (their holonomies enter through the boundary arcs).
    ambient : TorusAmbient
    precision : int, optional
        Decimal digits for an mpmath evaluation of the exponentials.
    """
    if holomorphic_count(c) == 0:
        raise NonContributingClass("class carries no holomorphic polygon")
    geom = class_geometry(c)
    areas = geom.euclidean_area
    hol = _holonomy_exponent(geom, branes)
    rho = complex(1.0)
    for r in inputs:
        rho *= complex(r)
    real = _real_exponent(areas, ambient)
    modulus = math.exp(real) * math.prod(abs(complex(r)) for r in inputs)
    turns = _phase_turns(areas, hol, ambient)
    if precision is None:
        value = math.exp(real) * complex(math.cos(TWO_PI * turns), math.sin(TWO_PI * turns)) * rho
    else:
        with mpmath.workdps(precision):
            z = mpmath.exp(_mp_exponent(areas, hol, ambient)) * mpmath.mpc(rho)
            value = complex(z)
    return Weight(value, areas, hol, rho, real, modulus)


def _mp_exponent(areas, hol, ambient):
    """``2 pi i (sum tau_f area_f + hol)`` in the current mpmath precision."""
    s = mpmath.mpc(0)
    for a, b, ar in zip(ambient.area, ambient.b, areas):
        q = mpmath.mpf(ar.numerator) / ar.denominator
        s += mpmath.mpc(mpmath.mpf(b), mpmath.mpf(a)) * q
    s += mpmath.mpf(hol.numerator) / hol.denominator
    return 2 * mpmath.pi * 1j * s


# ----------------------------------------------------------------------------
# Tail bounds
# ----------------------------------------------------------------------------


def _quadratic_tail(q: AreaQuadratic, weight: float, cutoff: Fraction) -> float:
    """Upper bound on ``sum_{j : q(j) > cutoff} exp(-2 pi weight q(j))``."""
    if q.a <= 0:
        raise NonPositiveLeadingCoefficient(f"leading coefficient {q.a} is not positive")
    v = q.vertex()
    win = q.window(cutoff)
    if len(win):
        right, left = win.stop, win.start - 1
    else:
        right = math.ceil(v)
        left = right - 1
    total = 0.0
    # Increments q(j+1) - q(j) grow with j to the right of the vertex, so each
    # tail is dominated by a geometric series with the first ratio.
    step = q(right + 1) - q(right)
    total += math.exp(-TWO_PI * weight * float(q(right))) / -math.expm1(-TWO_PI * weight * float(step))
    step = q(left - 1) - q(left)
    total += math.exp(-TWO_PI * weight * float(q(left))) / -math.expm1(-TWO_PI * weight * float(step))
    return total


def tail_bound(area_quadratics, cutoff, ambient) -> float:
    """Bound on the excluded part of one product family of classes.

    Parameters
    ----------
    area_quadratics : list of AreaQuadratic
        One quadratic per torus factor; the family is the product of the
        per-factor integer families and a class has weighted area
        ``sum_f A_f q_f(j_f)``.
    cutoff : rational
        Classes with weighted area ``<= cutoff`` are included.
    ambient : TorusAmbient or sequence of areas

    Returns
    -------
    float
        An upper bound on ``sum exp(-2 pi sum_f A_f q_f(j_f))`` over the
        excluded classes.  A class above the cutoff has some factor above
        ``cutoff / n``, which gives the union bound used here.
    """
    quads = list(area_quadratics)
    if not quads:
        return 0.0
    areas = ambient.area if isinstance(ambient, TorusAmbient) else tuple(ambient)
    for q in quads:
        if q.a <= 0:
            raise NonPositiveLeadingCoefficient(f"leading coefficient {q.a} is not positive")
    n = len(quads)
    cutoff = Fraction(cutoff)
    if n == 1:
        return _quadratic_tail(quads[0], float(areas[0]), cutoff / Fraction(areas[0]))
    never = Fraction(-1)
    full = [_quadratic_tail(q, float(a), never) for q, a in zip(quads, areas)]
    total = 0.0
    for f, (q, a) in enumerate(zip(quads, areas)):
        others = math.prod(full[g] for g in range(n) if g != f)
        total += _quadratic_tail(q, float(a), cutoff / (n * Fraction(a))) * others
    return total


def polygon_tail_bound(problem, cutoff, area: float) -> float:
    """Tail bound for one-factor families with ``k >= 3`` by counting in area shells.

    Every convex closed polygon of area ``<= X`` has lift indices inside the
    box built from the edge-length bound at ``X``, so the number ``N(X)`` of
    such classes is at most the box size.  The excluded sum is bounded by
    ``sum_i N(C + i + 1) exp(-2 pi A (C + i))``; the ratios of successive
    terms decrease, which lets the remainder be closed with a geometric series.
    """
    cutoff = float(cutoff)
    norms = [math.hypot(*problem.lines[j].direction) for j in range(1, problem.k)]

    def count(x):
        bound = problem.length_bound(x)
        return math.prod(2 * (bound / nm + 2) + 1 for nm in norms)

    def term(i):
        return count(cutoff + i + 1) * math.exp(-TWO_PI * area * (cutoff + i))

    total, i = 0.0, 0
    prev = term(0)
    while True:
        total += prev
        nxt = term(i + 1)
        ratio = nxt / prev if prev > 0 else 0.0
        if ratio < 0.5 and nxt < 1e-30 * max(total, 1e-300):
            return total + nxt / (1.0 - ratio)
        if i > 100000:
            raise ConvergenceFailure("shell series did not settle", total)
        prev, i = nxt, i + 1


# ----------------------------------------------------------------------------
# Structure maps
# ----------------------------------------------------------------------------


@dataclass
class MuReport:
    element: CFElement
    tail_bound: float
    classes_used: int
    cutoff: Fraction
    families: int


def _check_chain(branes, inputs, k):
    if k < 1:
        raise ValueError("k must be at least 1")
    if len(branes) != k + 1 or len(inputs) != k:
        raise ValueError("mu^k needs k+1 branes and k inputs")
    for j in range(k + 1):
        check_transverse(branes[j - 1], branes[j])
    for j, rho in enumerate(inputs, start=1):
        if rho.source != branes[j - 1] or rho.target != branes[j]:
            raise InputParseError(f"input {j} is not a morphism from brane {j - 1} to brane {j}")


def _families(branes, inputs):
    """``(g_0, (g_1..g_k), input scalars)`` over the non-zero input supports."""
    supports = [[(g, rho[g]) for g in rho.generators() if rho[g] != 0] for rho in inputs]
    outs = intersect(branes[0], branes[-1])
    fams = []
    for g0 in outs:
        for combo in product(*supports):
            fams.append((g0, tuple(g for g, _ in combo), tuple(v for _, v in combo)))
    return fams


def _family_tail(branes, g0, gens, ambient, cutoff) -> float:
    k = len(branes) - 1
    if k == 2:
        quads = triangle_families(branes, list(gens), g0)
        return 0.0 if quads is None else tail_bound(quads, cutoff, ambient)
    problems = polygon_length_bounds(branes, list(gens), g0)
    return polygon_tail_bound(problems[0], cutoff / Fraction(ambient.area[0]), float(ambient.area[0]))


def _supported(k: int, n: int) -> None:
    if k >= 3 and n >= 2:
        raise NotImplementedError(
            "for n >= 2 and k >= 3 rigid polygons are not products of factor polygons; "
            "their count needs a matching of conformal moduli that is not implemented"
        )


def mu_with_report(
    k: int,
    branes,
    inputs,
    ambient: TorusAmbient,
    tol: float = 1e-12,
    max_cutoff=Fraction(4096),
    initial_cutoff=Fraction(1),
    precision: int | None = None,
    threads: int = 1,
) -> MuReport:
    """Compute ``mu^k(rho_k, ..., rho_1)`` with an explicit truncation bound.

    The area cutoff starts at ``initial_cutoff`` and doubles until the summed
    tail bound (weighted by input magnitudes) is below ``tol``.  Classes are
    summed in lift-index order per family and families in a fixed order, so
    the result does not depend on ``threads``.
    """
    branes = list(branes)
    inputs = list(inputs)
    _check_chain(branes, inputs, k)
    _supported(k, branes[0].n)
    out_degree = 2 - k + sum(rho.degree for rho in inputs)
    src, tgt = branes[0], branes[-1]
    zero = CFElement(src, tgt, {}, out_degree)
    if k == 1 or brane_degree(src, tgt) != out_degree:
        return MuReport(zero, 0.0, 0, Fraction(0), 0)
    fams = _families(branes, inputs)
    if not fams:
        return MuReport(zero, 0.0, 0, Fraction(0), 0)

    def total_tail(cut):
        return math.fsum(
            _family_tail(branes, g0, gens, ambient, cut) * math.prod(abs(v) for v in vals)
            for g0, gens, vals in fams
        )

    cutoff = Fraction(initial_cutoff)
    bound = total_tail(cutoff)
    while bound >= tol:
        if cutoff >= max_cutoff:
            raise ConvergenceFailure(f"tail bound {bound:.3e} >= tol at max cutoff {max_cutoff}", bound)
        cutoff = min(2 * cutoff, Fraction(max_cutoff))
        bound = total_tail(cutoff)

    def run(fam):
        g0, gens, vals = fam
        weights = []
        for c in enumerate_classes(branes, list(gens), g0, cutoff, ambient.area):
            if holomorphic_count(c):
                weights.append(class_weight(c, vals, branes, ambient, precision).value)
        return g0.point, weights

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, fams))
    else:
        results = [run(f) for f in fams]
    coeffs: dict = {}
    used = 0
    for point, weights in results:
        used += len(weights)
        if precision is None:
            s = _sum_complex(weights)
        else:
            with mpmath.workdps(precision):
                s = complex(mpmath.fsum(mpmath.mpc(w) for w in weights))
        coeffs[point] = coeffs.get(point, 0j) + s
    return MuReport(CFElement(src, tgt, coeffs, out_degree), bound, used, cutoff, len(fams))


def _sum_complex(values) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def mu(k: int, branes, inputs, ambient: TorusAmbient, tol: float = 1e-12, **kwargs) -> CFElement:
    """``mu^k(rho_k, ..., rho_1)`` as a :class:`CFElement` of ``CF(b_0, b_k)``."""
    return mu_with_report(k, branes, inputs, ambient, tol, **kwargs).element


def _gain(k, branes, inputs, ambient, tol) -> float:
    """Largest output coefficient of the all-positive series ``sum |weight|``."""
    flat = [b.replace(holonomy=None) for b in branes]
    flat_inputs = [
        CFElement(flat[j], flat[j + 1], {p: abs(v) for p, v in rho.coeffs.items()}, rho.degree)
        for j, rho in enumerate(inputs)
    ]
    amb = TorusAmbient(ambient.area, (0.0,) * ambient.n)
    rep = mu_with_report(k, flat, flat_inputs, amb, tol)
    return max((abs(v) for v in rep.element.coeffs.values()), default=0.0) + rep.tail_bound


@dataclass
class AssociativityReport:
    left: CFElement
    right: CFElement
    discrepancy: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "discrepancy": self.discrepancy,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def associativity_check(branes, inputs, ambient: TorusAmbient, tol: float = 1e-12, raise_on_fail=False):
    """Compare ``mu2(mu2(rho3, rho2), rho1)`` with ``mu2(rho3, mu2(rho2, rho1))``.

    The combined tolerance accounts for both truncations: an error ``e`` in an
    inner product is amplified by at most the absolute series of the outer
    product, and each outer product adds its own tail bound.
    """
    b0, b1, b2, b3 = branes
    r1, r2, r3 = inputs
    for a, b in ((b0, b2), (b1, b3), (b0, b3)):
        if any(la.is_parallel(lb) for la, lb in zip(a.lines, b.lines)):
            raise ParallelLines("all four branes must be pairwise transverse")
    inner_l = mu_with_report(2, [b1, b2, b3], [r2, r3], ambient, tol)
    outer_l = mu_with_report(2, [b0, b1, b3], [r1, inner_l.element], ambient, tol)
    inner_r = mu_with_report(2, [b0, b1, b2], [r1, r2], ambient, tol)
    outer_r = mu_with_report(2, [b0, b2, b3], [inner_r.element, r3], ambient, tol)
    left, right = outer_l.element, outer_r.element
    gain_l = _gain(2, [b0, b1, b3], [r1, CFElement.constant(b1, b3, 1.0)], ambient, tol)
    gain_r = _gain(2, [b0, b2, b3], [CFElement.constant(b0, b2, 1.0), r3], ambient, tol)
    scale = max([abs(v) for v in left.coeffs.values()] + [abs(v) for v in right.coeffs.values()] + [1.0])
    combined = (
        outer_l.tail_bound + outer_r.tail_bound
        + inner_l.tail_bound * gain_l + inner_r.tail_bound * gain_r
        + 1e-14 * scale
    )
    disc = left.max_abs_difference(right)
    report = AssociativityReport(left, right, disc, combined, disc <= combined)
    if raise_on_fail and not report.passed:
        raise MismatchBeyondTolerance(f"associativity discrepancy {disc:.3e} > {combined:.3e}", disc)
    return report


__all__ = [
    "CFElement",
    "Weight",
    "MuReport",
    "AssociativityReport",
    "class_weight",
    "tail_bound",
    "polygon_tail_bound",
    "mu",
    "mu_with_report",
    "associativity_check",
]
