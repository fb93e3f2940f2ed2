"""Refining quadrature rules used by the circle model and the relative pairing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import QuadratureNotConverged


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float  # |last - previous| at the accepted level
    nodes: int
    levels: int


def gauss_legendre(a: float, b: float, n: int):
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on ``[a, b]``."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def refine(rule, tol: float, start: int = 8, max_levels: int = 12) -> QuadResult:
    """Double the resolution of ``rule(n)`` until two levels agree within ``tol / 10``."""
    n = start
    prev = rule(n)
    for level in range(1, max_levels + 1):
        n *= 2
        cur = rule(n)
        err = abs(cur - prev)
        if err <= tol / 10 * max(1.0, abs(cur)):
            return QuadResult(float(cur), float(err), n, level)
        prev = cur
    raise QuadratureNotConverged(f"no agreement within {tol / 10:.1e} after {max_levels} refinements (last change {err:.2e})")


def polar_integral(f, r_inner: float, r_outer: float, tol: float = 1e-12, max_levels: int = 10) -> QuadResult:
    """``int f(x, y) dx dy`` over the annulus ``r_inner <= |z| <= r_outer`` (a disc if ``r_inner = 0``).

    Gauss-Legendre in the radius and the periodic trapezoid rule in the
    angle; both resolutions double per level.
    """

    def rule(n):
        r, wr = gauss_legendre(r_inner, r_outer, n)
        th = np.arange(2 * n) * (np.pi / n)
        R, T = np.meshgrid(r, th, indexing="ij")
        vals = np.asarray(f(R * np.cos(T), R * np.sin(T)), dtype=float) * np.ones_like(R)
        return float(np.sum(wr[:, None] * vals * R) * (np.pi / n))

    return refine(rule, tol, max_levels=max_levels)


def line_integral(g, a: float, b: float, tol: float = 1e-12, max_levels: int = 12) -> QuadResult:
    """``int_a^b g(t) dt`` by Gauss-Legendre with doubling."""

    def rule(n):
        t, w = gauss_legendre(a, b, n)
        return float(np.sum(w * np.asarray(g(t), dtype=float)))

    return refine(rule, tol, start=4, max_levels=max_levels)


def cylinder_integral(h, tol: float = 1e-12, max_levels: int = 10) -> QuadResult:
    """``int_0^{2 pi} int_0^1 h(theta, t) dt dtheta`` (periodic in theta)."""

    def rule(n):
        t, wt = gauss_legendre(0.0, 1.0, n)
        th = np.arange(2 * n) * (np.pi / n)
        TH, TT = np.meshgrid(th, t, indexing="ij")
        vals = np.asarray(h(TH, TT), dtype=float) * np.ones_like(TH)
        return float(np.sum(vals * wt[None, :]) * (np.pi / n))

    return refine(rule, tol, max_levels=max_levels)
