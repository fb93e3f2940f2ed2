"""Relative de Rham pairings on triangulated relative 2-cycles.

A relative 2-cocycle is a pair ``(B, theta)`` with ``B`` a 2-form on ``X`` and
``theta`` a 1-form on ``L`` (here given as an ambient 1-form, restricted to
``L`` when paired), closed for ``d(B, theta) = (dB, j^*B - d theta)``.  A
relative cycle ``f : (S, dS) -> (X, L)`` is a triangulated oriented surface
with boundary mapped into ``L``.  The pairing is

    <(B, theta), f> = int_S f^*B - int_{dS} f^*theta.

Two kinds of cycle are supported:

* smooth: a triangulated parameter domain with an exact sympy map, so the
  boundary lies exactly on ``L`` and only quadrature error remains;
* piecewise-linear: ambient vertex positions (e.g. from a JSON mesh), with
  flat triangles and straight boundary chords.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .exceptions import CocycleViolation, ConvergenceOrderViolation, DegenerateMesh, InputParseError
from .forms import Form, Submanifold, coords

# 7-point degree-5 rule on the reference triangle (area 1/2), barycentric (xi1, xi2).
_S15 = math.sqrt(15.0)
_A1, _B1 = (6 - _S15) / 21, (9 + 2 * _S15) / 21
_A2, _B2 = (6 + _S15) / 21, (9 - 2 * _S15) / 21
_W1, _W2 = (155 - _S15) / 2400, (155 + _S15) / 2400
TRI7 = (
    np.array([[1 / 3, 1 / 3], [_A1, _A1], [_B1, _A1], [_A1, _B1], [_A2, _A2], [_B2, _A2], [_A2, _B2]]),
    np.array([9 / 80, _W1, _W1, _W1, _W2, _W2, _W2]),
)
TRI3 = (np.array([[1 / 6, 1 / 6], [2 / 3, 1 / 6], [1 / 6, 2 / 3]]), np.full(3, 1 / 6))
_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)
EDGE5 = (0.5 * (_GL_X + 1), 0.5 * _GL_W)


@dataclass
class RelCocycle:
    """``(B, theta)`` on ``(R^dim, L)``; ``theta`` is an ambient 1-form restricted to ``L``."""

    B: Form
    theta: Form
    L: Submanifold

    def __post_init__(self):
        if self.B.degree != 2 or self.theta.degree != 1:
            raise InputParseError("B must be a 2-form and theta a 1-form")
        if not (self.B.dim == self.theta.dim == self.L.dim):
            raise InputParseError("B, theta and L must live in the same R^N")

    @property
    def dim(self) -> int:
        return self.B.dim

    def defects(self, samples: int = 64, seed: int = 0) -> tuple:
        """Largest sampled ``|dB|`` and ``|j^*B - d j^*theta|``."""
        rng = np.random.default_rng(seed)
        dB = self.B.d()
        pts = rng.uniform(-2, 2, size=(samples, self.dim))
        d_defect = 0.0
        if not dB.is_zero():
            for idx in dB.terms:
                f = sp.lambdify(coords(self.dim), dB.terms[idx], "numpy")
                d_defect = max(d_defect, float(np.max(np.abs(np.asarray(f(*pts.T), dtype=float) * np.ones(samples)))))
        rel_defect = 0.0
        if self.L.k >= 2:
            diff = self.L.restrict(self.B) - self.L.restrict(self.theta).d()
            lp = rng.uniform(0, self.L.period, size=(samples, self.L.k))
            for idx, c in diff.terms.items():
                f = sp.lambdify(coords(self.L.k), c, "numpy")
                rel_defect = max(rel_defect, float(np.max(np.abs(np.asarray(f(*lp.T), dtype=float) * np.ones(samples)))))
        return d_defect, rel_defect

    def check(self, tol: float = 1e-9) -> None:
        """Raise :class:`CocycleViolation` unless ``dB = 0`` and ``j^*B = d theta`` at samples.

        On a curve ``j^*B`` and ``d theta`` are 2-forms on a 1-manifold and vanish
        identically, so only ``dB`` is tested there.
        """
        d_defect, rel_defect = self.defects()
        if d_defect > tol:
            raise CocycleViolation(f"dB does not vanish (max {d_defect:.3e})")
        if rel_defect > tol:
            raise CocycleViolation(f"j*B != d theta on L (max {rel_defect:.3e})")


def gauge_shift(c: RelCocycle, A: Form | None = None, psi=None) -> RelCocycle:
    """``(B, theta) + d(A, psi) = (B + dA, theta + A - d psi)``.

    ``psi`` is given as an ambient function (expression in ``x0..``) and only
    its restriction to ``L`` matters.
    """
    dim = c.dim
    A = Form.zero(dim, 1) if A is None else A
    dpsi = Form.zero(dim, 1) if psi is None else Form.function(dim, psi).d()
    return RelCocycle(c.B + A.d(), c.theta + A - dpsi, c.L)


@dataclass
class RelCycle:
    """A triangulated relative 2-cycle.

    Parameters
    ----------
    ids : (T, 3) int array
        Vertex ids per triangle (topology; counterclockwise orientation).
    L : Submanifold
    params : (T, 3, 2) array, optional
        Parameter coordinates of each triangle corner (smooth kind).
    mapping : tuple of sympy expressions in ``u, v``, optional
        Exact map from the parameter domain to ``R^N`` (smooth kind).
    vertices : (V, N) array, optional
        Ambient vertex positions (piecewise-linear kind).
    lparams : dict, optional
        L-parameters of boundary vertices, used to check that they lie on ``L``.
    collapsed : set of int, optional
        Vertex ids the map sends to a single point (e.g. the centre of polar
        coordinates); edges between two of them have zero length and are not
        part of the boundary.
    h : float
        Mesh size, recorded for refinement studies.
    """

    ids: np.ndarray
    L: Submanifold
    params: np.ndarray | None = None
    mapping: tuple | None = None
    vertices: np.ndarray | None = None
    lparams: dict = field(default_factory=dict)
    h: float = float("nan")
    name: str = ""
    collapsed: frozenset = frozenset()

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=int)
        if self.ids.ndim != 2 or self.ids.shape[1] != 3:
            raise DegenerateMesh("triangles must be index triples")
        if (self.params is None) == (self.vertices is None):
            raise DegenerateMesh("give either parameter coordinates with a map, or ambient vertices")
        if self.params is not None:
            self.params = np.asarray(self.params, dtype=float)
            u, v = sp.symbols("u v", real=True)
            self._F = sp.lambdify((u, v), list(self.mapping), "numpy")
            self._DF = sp.lambdify((u, v), [[sp.diff(e, s) for s in (u, v)] for e in self.mapping], "numpy")
        else:
            self.vertices = np.asarray(self.vertices, dtype=float)
            if self.ids.min() < 0 or self.ids.max() >= len(self.vertices):
                raise DegenerateMesh("triangle index out of range")
        ids = self.ids
        if np.any((ids[:, 0] == ids[:, 1]) | (ids[:, 1] == ids[:, 2]) | (ids[:, 0] == ids[:, 2])):
            raise DegenerateMesh("repeated vertex in a triangle")
        self.boundary = self._boundary_edges()

    @property
    def kind(self) -> str:
        return "smooth" if self.params is not None else "pl"

    @property
    def dim(self) -> int:
        return len(self.mapping) if self.mapping is not None else self.vertices.shape[1]

    def _boundary_edges(self):
        """Edges used once, oriented with the surface on their left; interior edges must pair up."""
        seen = {}
        for t, tri in enumerate(self.ids):
            for a in range(3):
                i, j = int(tri[a]), int(tri[(a + 1) % 3])
                if i == j:
                    continue
                if (i, j) in seen:
                    raise DegenerateMesh(f"edge {(i, j)} used twice with the same orientation")
                seen[(i, j)] = (t, a)
        bdry = [
            (e, loc)
            for e, loc in seen.items()
            if (e[1], e[0]) not in seen and not (e[0] in self.collapsed and e[1] in self.collapsed)
        ]
        out = {}
        for e, loc in bdry:
            out.setdefault(e[0], []).append((e, loc))
        if any(len(v) != 1 for v in out.values()):
            raise DegenerateMesh("boundary is not a disjoint union of simple loops")
        ends = {e[1] for e, _ in bdry}
        if ends != set(out):
            raise DegenerateMesh("boundary edges do not close into loops")
        return [loc for _, loc in sorted(bdry)]

    # geometry at quadrature points -------------------------------------------------

    def _map(self, uv):
        vals = self._F(uv[:, 0], uv[:, 1])
        return np.stack([np.asarray(c, dtype=float) * np.ones(len(uv)) for c in vals], axis=1)

    def _jac(self, uv):
        rows = self._DF(uv[:, 0], uv[:, 1])
        return np.stack(
            [np.stack([np.asarray(c, dtype=float) * np.ones(len(uv)) for c in row], axis=1) for row in rows], axis=1
        )  # (M, N, 2)

    def triangle_samples(self, rule=TRI7):
        """Ambient points, tangent pairs and weights for every triangle and rule point."""
        xi, w = rule
        T = len(self.ids)
        if self.kind == "smooth":
            P = self.params
            e1, e2 = P[:, 1] - P[:, 0], P[:, 2] - P[:, 0]
            uv = P[:, None, 0] + xi[None, :, 0, None] * e1[:, None] + xi[None, :, 1, None] * e2[:, None]
            uv = uv.reshape(-1, 2)
            J = self._jac(uv)
            t1 = np.einsum("mnk,mk->mn", J, np.repeat(e1, len(w), axis=0))
            t2 = np.einsum("mnk,mk->mn", J, np.repeat(e2, len(w), axis=0))
            x = self._map(uv)
        else:
            V = self.vertices[self.ids]  # (T, 3, N)
            d1, d2 = V[:, 1] - V[:, 0], V[:, 2] - V[:, 0]
            x = (V[:, None, 0] + xi[None, :, 0, None] * d1[:, None] + xi[None, :, 1, None] * d2[:, None]).reshape(-1, V.shape[2])
            t1 = np.repeat(d1, len(w), axis=0)
            t2 = np.repeat(d2, len(w), axis=0)
        return x, t1, t2, np.tile(w, T)

    def edge_samples(self, rule=EDGE5):
        s, w = rule
        xs, ts, ws = [], [], []
        for t, a in self.boundary:
            if self.kind == "smooth":
                pa, pb = self.params[t, a], self.params[t, (a + 1) % 3]
                uv = pa[None] + s[:, None] * (pb - pa)[None]
                J = self._jac(uv)
                xs.append(self._map(uv))
                ts.append(np.einsum("mnk,k->mn", J, pb - pa))
            else:
                va, vb = self.vertices[self.ids[t, a]], self.vertices[self.ids[t, (a + 1) % 3]]
                xs.append(va[None] + s[:, None] * (vb - va)[None])
                ts.append(np.repeat((vb - va)[None], len(s), axis=0))
            ws.append(w)
        if not xs:
            return np.zeros((0, self.dim)), np.zeros((0, self.dim)), np.zeros(0)
        return np.concatenate(xs), np.concatenate(ts), np.concatenate(ws)

    def boundary_vertices(self):
        return sorted({int(self.ids[t, a]) for t, a in self.boundary})

    def check_on_L(self, tol: float = 1e-9) -> float:
        """Largest distance between a boundary vertex and ``L`` at its recorded parameter."""
        worst = 0.0
        for t, a in self.boundary:
            vid = int(self.ids[t, a])
            if vid not in self.lparams:
                raise DegenerateMesh(f"boundary vertex {vid} has no L-parameter")
            pos = self._map(self.params[t, a][None])[0] if self.kind == "smooth" else self.vertices[vid]
            on_l = self.L.point(np.atleast_1d(self.lparams[vid]))[0]
            worst = max(worst, float(np.linalg.norm(pos - on_l)))
        if worst > tol:
            raise DegenerateMesh(f"boundary vertex off L by {worst:.3e}")
        return worst

    def check_nondegenerate(self) -> None:
        if self.kind == "pl":
            V = self.vertices[self.ids]
            d1, d2 = V[:, 1] - V[:, 0], V[:, 2] - V[:, 0]
            gram = np.einsum("ti,ti->t", d1, d1) * np.einsum("ti,ti->t", d2, d2) - np.einsum("ti,ti->t", d1, d2) ** 2
            pinched = np.array([sum(int(i) in self.collapsed for i in tri) >= 2 for tri in self.ids], dtype=bool)
            if np.any((gram <= 1e-300) & ~pinched):
                raise DegenerateMesh("a triangle has zero area")
        else:
            P = self.params
            e1, e2 = P[:, 1] - P[:, 0], P[:, 2] - P[:, 0]
            if np.any(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] <= 0):
                raise DegenerateMesh("a parameter triangle is degenerate or clockwise")

    # serialization -------------------------------------------------------------

    def to_mesh_dict(self) -> dict:
        """Piecewise-linear JSON mesh (vertices, triangles, boundary loops, L-parameters)."""
        if self.kind == "smooth":
            pos = {}
            for t in range(len(self.ids)):
                for a in range(3):
                    pos.setdefault(int(self.ids[t, a]), self._map(self.params[t, a][None])[0])
            n = max(pos) + 1
            verts = [pos[i].tolist() for i in range(n)]
        else:
            verts = self.vertices.tolist()
        loops = _loops([(int(self.ids[t, a]), int(self.ids[t, (a + 1) % 3])) for t, a in self.boundary])
        return {
            "schema": "fukaya-torus/mesh/1",
            "vertices": verts,
            "triangles": self.ids.tolist(),
            "boundary_loops": loops,
            "l_params": {str(k): np.atleast_1d(v).tolist() for k, v in self.lparams.items()},
            "collapsed": sorted(self.collapsed),
        }

    @classmethod
    def from_mesh_dict(cls, data: dict, L: Submanifold) -> "RelCycle":
        try:
            verts = np.asarray(data["vertices"], dtype=float)
            tris = np.asarray(data["triangles"], dtype=int)
            lp = {int(k): np.asarray(v, dtype=float) for k, v in data.get("l_params", {}).items()}
        except (KeyError, ValueError, TypeError) as exc:
            raise DegenerateMesh(f"mesh: {exc}") from exc
        collapsed = frozenset(int(i) for i in data.get("collapsed", []))
        z = cls(tris, L, vertices=verts, lparams=lp, name=data.get("name", "mesh"), collapsed=collapsed)
        given = data.get("boundary_loops")
        if given is not None:
            derived = _loops([(int(z.ids[t, a]), int(z.ids[t, (a + 1) % 3])) for t, a in z.boundary])
            if sorted(map(_canonical_loop, given)) != sorted(map(_canonical_loop, derived)):
                raise DegenerateMesh("declared boundary loops do not match the triangulation")
        z.check_nondegenerate()
        return z


def _loops(edges):
    nxt = dict(edges)
    loops, seen = [], set()
    for start in sorted(nxt):
        if start in seen:
            continue
        loop, v = [], start
        while v not in seen:
            seen.add(v)
            loop.append(v)
            v = nxt[v]
        loops.append(loop)
    return loops


def _canonical_loop(loop):
    loop = list(loop)
    i = loop.index(min(loop))
    return tuple(loop[i:] + loop[:i])


# ----------------------------------------------------------------------------
# Mesh builders
# ----------------------------------------------------------------------------


def polar_disc_cycle(mapping, L: Submanifold, lparam, n_rho: int, n_phi: int, name: str = "") -> RelCycle:
    """Smooth cycle on ``(u, v) in [0, 1]^2`` with ``v`` periodic and ``u = 0`` collapsed.

    ``mapping`` gives ``f(u, v)``; it must send ``u = 1`` into ``L``, with
    ``lparam(v)`` the L-parameter there, and be independent of ``v`` at
    ``u = 0``.  Vertex ids identify ``v = 0`` with ``v = 1`` and collapse
    ``u = 0`` to one centre vertex, so the only boundary is ``u = 1``.
    """

    def vid(i, j):
        if i == 0:
            return j % n_phi
        return n_phi + (i - 1) * n_phi + (j % n_phi)

    ids, params = [], []
    for i in range(n_rho):
        for j in range(n_phi):
            p00 = (i / n_rho, j / n_phi)
            p10 = ((i + 1) / n_rho, j / n_phi)
            p11 = ((i + 1) / n_rho, (j + 1) / n_phi)
            p01 = (i / n_rho, (j + 1) / n_phi)
            tri_a = ((i, j), (i + 1, j), (i + 1, j + 1)), (p00, p10, p11)
            tri_b = ((i, j), (i + 1, j + 1), (i, j + 1)), (p00, p11, p01)
            for corners, pts in (tri_a, tri_b):
                ids.append([vid(*c) for c in corners])
                params.append(pts)
    lp = {vid(n_rho, j): lparam(j / n_phi) for j in range(n_phi)}
    h = max(1.0 / n_rho, 1.0 / n_phi)
    return RelCycle(
        np.array(ids), L, params=np.array(params), mapping=tuple(mapping), lparams=lp, h=h, name=name,
        collapsed=frozenset(range(n_phi)),
    )


def pl_from_smooth(z: RelCycle) -> RelCycle:
    """Piecewise-linear interpolant of a smooth cycle (same triangulation)."""
    d = z.to_mesh_dict()
    out = RelCycle.from_mesh_dict(d, z.L)
    out.h = z.h
    out.name = f"{z.name}-pl"
    return out


_u, _v = sp.symbols("u v", real=True)


def disc_family(s, kind: str = "bump"):
    """Homotopic discs in ``(R^2, unit circle)`` from one shared homotopy expression.

    ``kind="bump"``: interior bump plus a twist that slides the boundary along
    the circle, scaled by ``s``.  ``kind="reparam"``: a radial
    reparametrization of the flat disc, scaled by ``s``.
    """
    s = sp.nsimplify(s)
    if kind == "bump":
        rad = _u + s * sp.Rational(3, 10) * _u * (1 - _u) * (1 + sp.cos(2 * sp.pi * _v) / 2)
        ang = 2 * sp.pi * (_v + s * sp.Rational(1, 5) * _u**2)
    elif kind == "reparam":
        rad = _u + s * sp.Rational(1, 2) * _u * (1 - _u)
        ang = 2 * sp.pi * _v
    else:
        raise ValueError(f"unknown family {kind!r}")
    mapping = (rad * sp.cos(ang), rad * sp.sin(ang))
    shift = float(s) / 5 if kind == "bump" else 0.0
    return mapping, (lambda v: 2 * math.pi * (v + shift))


def disc_cycle(s=0, level: int = 0, kind: str = "bump", base=(2, 4)) -> RelCycle:
    """Member ``s`` of :func:`disc_family` meshed at refinement ``level``."""
    mapping, lparam = disc_family(s, kind)
    n_r, n_p = base[0] * 2**level, base[1] * 2**level
    return polar_disc_cycle(mapping, Submanifold.circle(), lparam, n_r, n_p, name=f"disc[{kind},s={s}]")


def torus_cap_cycle(L: Submanifold, s, level: int = 0, centre=(0.0, 0.0), radius=0.5, base=(2, 4)) -> RelCycle:
    """Cone in ``R^4`` over a small loop on a parametrized torus ``L``.

    The loop is the circle of radius ``radius (1 - s/2)`` about ``centre`` in
    the torus parameters; the cone point is ``L(centre)``.  Varying ``s``
    slides the boundary through ``L`` and sweeps a region of ``L``.
    """
    a0, b0 = centre
    r = radius * (1 - sp.nsimplify(s) / 2)
    la = a0 + r * sp.cos(2 * sp.pi * _v)
    lb = b0 + r * sp.sin(2 * sp.pi * _v)
    a, b = L.params
    on_l = [e.subs({a: la, b: lb}, simultaneous=True) for e in L.mapping]
    c = [e.subs({a: a0, b: b0}, simultaneous=True) for e in L.mapping]
    mapping = tuple(ci + _u * (oi - ci) for ci, oi in zip(c, on_l))
    rr = float(r)

    def lparam(v):
        return (a0 + rr * math.cos(2 * math.pi * v), b0 + rr * math.sin(2 * math.pi * v))

    n_r, n_p = base[0] * 2**level, base[1] * 2**level
    return polar_disc_cycle(mapping, L, lparam, n_r, n_p, name=f"cap[{L.name},s={s}]")


# ----------------------------------------------------------------------------
# Pairing and Stokes study
# ----------------------------------------------------------------------------


@dataclass
class PairingResult:
    value: float
    surface: float
    boundary: float
    error_estimate: float
    elements: int


def rel_pairing(c: RelCocycle, z: RelCycle, check: bool = True) -> PairingResult:
    """``int_S f^*B - int_{dS} f^*theta`` by the 7-point triangle rule and 5-point edge rule.

    The error estimate is the sum over triangles of the difference between
    the 7-point and the 3-point rule.
    """
    if check:
        c.check()
        z.check_on_L()
    z.check_nondegenerate()
    x, t1, t2, w = z.triangle_samples(TRI7)
    vals = c.B.evaluate(x, t1, t2) * w
    surface = math.fsum(vals)
    x3, s1, s2, w3 = z.triangle_samples(TRI3)
    per7 = vals.reshape(len(z.ids), -1).sum(axis=1)
    per3 = (c.B.evaluate(x3, s1, s2) * w3).reshape(len(z.ids), -1).sum(axis=1)
    err = float(np.sum(np.abs(per7 - per3)))
    xe, te, we = z.edge_samples(EDGE5)
    boundary = math.fsum(c.theta.evaluate(xe, te) * we) if len(we) else 0.0
    return PairingResult(surface - boundary, surface, boundary, err, len(z.ids))


def fitted_order(hs, diffs, floor: float = 1e-13):
    """Least-squares slope of ``log diff`` against ``log h``, ignoring values at the noise floor.

    Returns ``inf`` when fewer than two values sit above the floor (the
    differences are already at round-off).
    """
    pts = [(math.log(h), math.log(d)) for h, d in zip(hs, diffs) if d > floor]
    if len(pts) < 2:
        return math.inf
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])


@dataclass
class StokesRow:
    level: int
    h: float
    elements: int
    pairing0: float
    pairing1: float
    homotopy_diff: float
    gauge_diff: float
    error_estimate: float


@dataclass
class StokesReport:
    rows: list
    homotopy_order: float
    gauge_order: float
    min_order: float
    passed: bool
    label: str = ""

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "rows": [r.__dict__ for r in self.rows],
            "homotopy_order": self.homotopy_order,
            "gauge_order": self.gauge_order,
            "min_order": self.min_order,
            "passed": self.passed,
        }

    def table(self) -> str:
        lines = [f"{'level':>5} {'h':>9} {'tris':>6} {'|P(z0)-P(z1)|':>14} {'|gauge diff|':>13} {'err est':>10}"]
        for r in self.rows:
            lines.append(
                f"{r.level:5d} {r.h:9.4f} {r.elements:6d} {r.homotopy_diff:14.3e} {r.gauge_diff:13.3e} {r.error_estimate:10.2e}"
            )
        lines.append(f"fitted orders: homotopy {self.homotopy_order:.2f}, gauge {self.gauge_order:.2f}")
        return "\n".join(lines)


def stokes_invariance_report(
    c: RelCocycle,
    z0_at,
    z1_at,
    levels=range(4),
    gauge=None,
    min_order: float = 2.0,
    floor: float = 1e-13,
    raise_on_fail: bool = True,
    label: str = "",
) -> StokesReport:
    """Refinement study of ``|<c, z0> - <c, z1>|`` and of the gauge difference.

    ``z0_at(level)`` and ``z1_at(level)`` build the two homotopic cycles at a
    refinement level; ``gauge = (A, psi)`` is the shift tested on ``z1``
    (the deformed cycle, which has no symmetry that could hide errors).
    """
    shifted = gauge_shift(c, *gauge) if gauge is not None else None
    rows = []
    for level in levels:
        z0, z1 = z0_at(level), z1_at(level)
        p0, p1 = rel_pairing(c, z0), rel_pairing(c, z1)
        gd = abs(rel_pairing(shifted, z1).value - p1.value) if shifted is not None else 0.0
        rows.append(
            StokesRow(level, z0.h, p0.elements, p0.value, p1.value, abs(p0.value - p1.value), gd,
                      p0.error_estimate + p1.error_estimate)
        )
    hs = [r.h for r in rows]
    ho = fitted_order(hs, [r.homotopy_diff for r in rows], floor)
    go = fitted_order(hs, [r.gauge_diff for r in rows], floor) if shifted is not None else math.inf
    passed = ho >= min_order and go >= min_order
    rep = StokesReport(rows, ho, go, min_order, passed, label)
    if raise_on_fail and not passed:
        raise ConvergenceOrderViolation(f"fitted order {min(ho, go):.2f} < {min_order}", min(ho, go))
    return rep


def disc_model_cocycle(kind: str = "area") -> RelCocycle:
    """Cocycles on ``(R^2, unit circle)`` used by the demos and tests."""
    L = Submanifold.circle()
    if kind == "area":
        return RelCocycle(Form(2, 2, {(0, 1): 1}), Form(2, 1, {0: "-x1/2", 1: "x0/2"}), L)
    if kind == "generic":
        return RelCocycle(Form(2, 2, {(0, 1): "1 + x0**2 + x0*x1 + exp(-x0**2 - x1**2)"}), Form(2, 1, {0: "x1**2", 1: "sin(x0)"}), L)
    raise ValueError(kind)


def disc_model_gauge():
    """A gauge shift ``(A, psi)`` with no parity symmetry, so its pairing is not zero by symmetry."""
    A = Form(2, 1, {0: "x1*exp(x0)", 1: "x0**2*cos(x1) + x1"})
    return A, "x0*x1 + x0**3 + exp(x1)"


def counterexample_study(levels=range(4), s1=1):
    """Pair ``(omega, 0)`` with two homotopic caps whose boundary slides through ``L``.

    On the Clifford torus (Lagrangian) the difference tends to zero; on the
    tilted torus ``j^* omega = cos(a - b) da^db`` it converges to the
    non-zero swept symplectic area.
    """
    from .forms import standard_symplectic

    omega = standard_symplectic(4)
    zero = Form.zero(4, 1)
    out = {}
    for L in (Submanifold.clifford_torus(), Submanifold.tilted_torus()):
        c = RelCocycle(omega, zero, L)
        rows = []
        for level in levels:
            p0 = rel_pairing(c, torus_cap_cycle(L, 0, level), check=False)
            p1 = rel_pairing(c, torus_cap_cycle(L, s1, level), check=False)
            rows.append((level, abs(p0.value - p1.value)))
        out[L.name] = rows
    return out
