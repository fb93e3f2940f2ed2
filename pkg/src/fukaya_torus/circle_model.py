"""A single Lagrangian circle in the plane, moved radially.

``X = R^2`` with ``omega = dx^dy`` and a closed ``B = b(x, y) dx^dy``.  The
circle ``L_t`` of radius ``r(t)`` carries a flat connection with holonomy
``beta``; the flat disc ``u_t`` it bounds has

    rho(u_t) = exp(2 pi i (int_disc B + i pi r(t)^2)) * exp(2 pi i beta).

Moving the circle by ``psi_t(e^{i theta}) = r(t) e^{i theta}`` gives
``psi^* omega = -r r' d theta ^ dt``, hence ``b_t = -r r' d theta`` and the
flux ``<theta_psi, du> = -pi (r_1^2 - r_0^2)``.  The moved disc ``u'`` is the
old disc plus the swept annulus, and the moved connection has holonomy
``beta' = beta + int_{S^1 x [0,1]} psi^* B``.  The B-field contributions
cancel, so ``rho(u') / rho(u) = exp(2 pi <theta_psi, du>)`` for every ``B``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .exceptions import InputParseError, MismatchBeyondTolerance
from .quadrature import cylinder_integral, line_integral, polar_integral

_x, _y = sp.symbols("x y", real=True)


def _as_field(b):
    """Vectorized ``(x, y) -> b(x, y)`` from a number, sympy expression, string or callable."""
    if b is None:
        return lambda x, y: np.zeros_like(np.asarray(x, dtype=float))
    if callable(b) and not isinstance(b, sp.Basic):
        return b
    try:
        expr = sp.sympify(b)
    except (sp.SympifyError, TypeError) as exc:
        raise InputParseError(f"cannot read B coefficient {b!r}") from exc
    extra = expr.free_symbols - {_x, _y}
    expr = expr.subs({s: {"x": _x, "y": _y}.get(s.name, s) for s in extra})
    if expr.free_symbols - {_x, _y}:
        raise InputParseError(f"B coefficient may only use x and y, got {expr}")
    f = sp.lambdify((_x, _y), expr, "numpy")
    return lambda x, y: np.asarray(f(x, y), dtype=float) * np.ones_like(np.asarray(x, dtype=float))


@dataclass
class PlaneDiscModel:
    """Circle of radius ``r(t)`` in ``(R^2, dx^dy)`` with B-field coefficient ``b``.

    Parameters
    ----------
    r0, r1 : float
        Radii at ``t = 0`` and ``t = 1``.
    b : expression or callable, optional
        Coefficient of ``B = b(x, y) dx^dy`` (default 0).
    beta : float
        Holonomy of the flat connection on the initial circle.
    radius, dradius : callable, optional
        A custom path ``r(t)`` and its derivative; the default is linear.
    tol : float
        Target accuracy of each quadrature.
    """

    r0: float = 1.0
    r1: float = 2.0
    b: object = None
    beta: float = 0.0
    radius: object = None
    dradius: object = None
    tol: float = 1e-12
    _field: object = field(init=False, repr=False)

    def __post_init__(self):
        if self.r0 <= 0 or self.r1 <= 0:
            raise InputParseError("radii must be positive")
        if (self.radius is None) != (self.dradius is None):
            raise InputParseError("give both radius and dradius, or neither")
        self._field = _as_field(self.b)
        if self.radius is not None:
            ends = (float(self.radius(0.0)), float(self.radius(1.0)))
            if abs(ends[0] - self.r0) > 1e-12 or abs(ends[1] - self.r1) > 1e-12:
                raise InputParseError("radius path must run from r0 to r1")

    def r(self, t):
        if self.radius is not None:
            return self.radius(t)
        return self.r0 + (self.r1 - self.r0) * np.asarray(t, dtype=float)

    def dr(self, t):
        if self.dradius is not None:
            return self.dradius(t)
        return (self.r1 - self.r0) * np.ones_like(np.asarray(t, dtype=float))

    def with_b(self, b) -> "PlaneDiscModel":
        return PlaneDiscModel(self.r0, self.r1, b, self.beta, self.radius, self.dradius, self.tol)


def disc_b_integral(model: PlaneDiscModel, radius: float, inner: float = 0.0):
    return polar_integral(model._field, inner, radius, model.tol)


def circle_disc_rho(model: PlaneDiscModel, at: float = 0.0, beta: float | None = None) -> complex:
    """``rho`` of the flat disc bounded by the circle of radius ``r(at)``."""
    radius = float(model.r(at))
    ib = disc_b_integral(model, radius).value
    hol = model.beta if beta is None else beta
    return cmath.exp(2j * math.pi * (ib + 1j * math.pi * radius**2)) * cmath.exp(2j * math.pi * hol)


def swept_b_flux(model: PlaneDiscModel):
    """``int_{S^1 x [0,1]} psi^* B`` in the orientation ``(theta, t)``."""
    f = model._field

    def h(theta, t):
        r = model.r(t)
        return -f(r * np.cos(theta), r * np.sin(theta)) * r * model.dr(t)

    return cylinder_integral(h, model.tol)


def flux_pairing(model: PlaneDiscModel):
    """``<theta_psi, du> = int_0^{2 pi} int_0^1 b_t dt`` with ``b_t = -r r' d theta``."""
    q = line_integral(lambda t: -model.r(t) * model.dr(t), 0.0, 1.0, model.tol)
    return 2 * math.pi * q.value, q.error * 2 * math.pi


def moved_disc_rho(model: PlaneDiscModel) -> complex:
    """``rho(u')`` for the inner disc plus the swept annulus, with the drifted holonomy."""
    inner = disc_b_integral(model, model.r0).value
    annulus = disc_b_integral(model, model.r1, inner=model.r0).value
    beta_new = model.beta + swept_b_flux(model).value
    area = math.pi * model.r1**2
    return cmath.exp(2j * math.pi * (inner + annulus + 1j * area)) * cmath.exp(2j * math.pi * beta_new)


@dataclass
class CircleReport:
    ratio: complex
    predicted: float
    rel_error: float
    flux_quadrature: float
    flux_analytic: float
    flux_error: float
    ratio_alt_b: complex
    b_independence_error: float
    tol: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "ratio": {"re": self.ratio.real, "im": self.ratio.imag},
            "predicted": self.predicted,
            "rel_error": self.rel_error,
            "flux_quadrature": self.flux_quadrature,
            "flux_analytic": self.flux_analytic,
            "flux_error": self.flux_error,
            "ratio_alt_b": {"re": self.ratio_alt_b.real, "im": self.ratio_alt_b.imag},
            "b_independence_error": self.b_independence_error,
            "tol": self.tol,
            "passed": self.passed,
        }


def _ratio(model: PlaneDiscModel) -> complex:
    return moved_disc_rho(model) / circle_disc_rho(model, 0.0)


def verify_circle_isotopy(model: PlaneDiscModel, tol: float = 1e-6, alt_b=None, raise_on_fail=False) -> CircleReport:
    """Check ``rho(u') / rho(u) = exp(2 pi <theta_psi, du>)`` and its B-independence.

    ``alt_b`` is a second B-field coefficient (default 0) for which the ratio
    is recomputed and compared.
    """
    ratio = _ratio(model)
    flux_q, _ = flux_pairing(model)
    flux_a = -math.pi * (model.r1**2 - model.r0**2)
    predicted = math.exp(2 * math.pi * flux_q)
    rel = abs(ratio - predicted) / predicted
    other = _ratio(model.with_b(alt_b))
    b_err = abs(ratio - other) / abs(other)
    passed = rel < tol and b_err < tol and abs(flux_q - flux_a) < max(1e-8, 10 * model.tol)
    report = CircleReport(ratio, predicted, rel, flux_q, flux_a, abs(flux_q - flux_a), other, b_err, tol, passed)
    if raise_on_fail and not passed:
        raise MismatchBeyondTolerance(f"circle ratio error {rel:.3e}, B-dependence {b_err:.3e}", rel)
    return report
