"""Differential forms on ``R^N`` with sympy coefficients, and parametrized submanifolds.

A ``k``-form is stored as ``{(i_1 < ... < i_k): coefficient}`` in the
coordinates ``x0, ..., x{N-1}``.  The exterior derivative and pullbacks are
symbolic; numerical evaluation goes through ``sympy.lambdify``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import sympy as sp

from .exceptions import InputParseError


def coords(n: int) -> tuple:
    return sp.symbols(f"x0:{n}", real=True)


def _sympify(expr, n: int):
    syms = coords(n)
    names = {f"x{i}": s for i, s in enumerate(syms)}
    if n == 2:
        names.update({"x": syms[0], "y": syms[1]})
    try:
        e = sp.sympify(expr, locals=names)
    except (sp.SympifyError, TypeError) as exc:
        raise InputParseError(f"cannot parse form coefficient {expr!r}") from exc
    stray = {s for s in e.free_symbols if s not in syms}
    if stray:
        raise InputParseError(f"unknown symbols {sorted(map(str, stray))} in {expr!r}")
    return e


def _sort_indices(idx):
    """Sign and sorted tuple of a multi-index (0 if it repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


@dataclass
class Form:
    """A differential ``degree``-form on ``R^dim``."""

    dim: int
    degree: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for idx, c in self.terms.items():
            idx = (idx,) if isinstance(idx, int) else tuple(idx)
            if len(idx) != self.degree or any(not 0 <= i < self.dim for i in idx):
                raise InputParseError(f"bad index {idx} for a {self.degree}-form on R^{self.dim}")
            sign, key = _sort_indices(idx)
            if sign == 0:
                continue
            clean[key] = clean.get(key, 0) + sign * _sympify(c, self.dim)
        self.terms = {k: sp.simplify(v) for k, v in clean.items() if sp.simplify(v) != 0}
        self._funcs = None

    @classmethod
    def zero(cls, dim: int, degree: int) -> "Form":
        return cls(dim, degree, {})

    @classmethod
    def function(cls, dim: int, expr) -> "Form":
        return cls(dim, 0, {(): expr})

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return Form(self.dim, self.degree, terms)

    def __neg__(self) -> "Form":
        return Form(self.dim, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scaled(self, c) -> "Form":
        return Form(self.dim, self.degree, {k: c * v for k, v in self.terms.items()})

    def _check(self, other):
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise ValueError("forms of different type")

    def d(self) -> "Form":
        """Exterior derivative."""
        syms = coords(self.dim)
        out: dict = {}
        for idx, c in self.terms.items():
            for i, s in enumerate(syms):
                dc = sp.diff(c, s)
                if dc == 0:
                    continue
                sign, key = _sort_indices((i,) + idx)
                if sign:
                    out[key] = out.get(key, 0) + sign * dc
        return Form(self.dim, self.degree + 1, out)

    def coefficient(self, idx):
        return self.terms.get(tuple(idx), sp.Integer(0))

    def is_zero(self) -> bool:
        return not self.terms

    def _lambdas(self):
        if self._funcs is None:
            syms = coords(self.dim)
            self._funcs = {k: sp.lambdify(syms, v, "numpy") for k, v in self.terms.items()}
        return self._funcs

    def evaluate(self, points, *vectors):
        """``form(x)(v_1, ..., v_k)`` at rows of ``points`` for tangent rows ``v_i``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(pts.shape[0])
        vecs = [np.atleast_2d(np.asarray(v, dtype=float)) for v in vectors]
        if len(vecs) != self.degree:
            raise ValueError(f"a {self.degree}-form takes {self.degree} vectors")
        args = [pts[:, i] for i in range(self.dim)]
        for idx, f in self._lambdas().items():
            coef = np.asarray(f(*args), dtype=float) * np.ones(pts.shape[0])
            if self.degree == 0:
                out += coef
            elif self.degree == 1:
                out += coef * vecs[0][:, idx[0]]
            elif self.degree == 2:
                i, j = idx
                out += coef * (vecs[0][:, i] * vecs[1][:, j] - vecs[0][:, j] * vecs[1][:, i])
            else:
                mat = np.stack([[v[:, a] for a in idx] for v in vecs], axis=0)  # (k, k, M)
                out += coef * np.linalg.det(np.moveaxis(mat, -1, 0))
        return out

    def pullback(self, mapping, params) -> "Form":
        """Pull back along ``x = mapping(params)`` (sympy expressions in ``params``).

        The result is expressed in the coordinates ``x0..`` of the parameter
        space, so it is again a :class:`Form`.
        """
        m = len(params)
        psyms = coords(m)
        sub = dict(zip(params, psyms))
        mp = [sp.sympify(e).subs(sub) for e in mapping]
        xs = coords(self.dim)
        jac = [[sp.diff(e, p) for p in psyms] for e in mp]
        out: dict = {}
        for idx, c in self.terms.items():
            cc = c.subs(dict(zip(xs, mp)), simultaneous=True)
            for pidx in combinations(range(m), self.degree):
                if self.degree == 0:
                    det = 1
                else:
                    det = sp.Matrix([[jac[i][p] for p in pidx] for i in idx]).det()
                out[pidx] = out.get(pidx, 0) + cc * det
        return Form(m, self.degree, out)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "degree": self.degree, "terms": {",".join(map(str, k)): str(v) for k, v in self.terms.items()}}

    @classmethod
    def from_dict(cls, data: dict) -> "Form":
        try:
            terms = {}
            for k, v in data.get("terms", {}).items():
                key = tuple(int(i) for i in str(k).split(",") if i.strip() != "")
                terms[key] = v
            return cls(int(data["dim"]), int(data["degree"]), terms)
        except (KeyError, ValueError, TypeError) as exc:
            raise InputParseError(f"form: {exc}") from exc


@dataclass
class Submanifold:
    """A parametrized submanifold ``L = image(params -> mapping)`` of ``R^dim``.

    Parameters live in ``[0, period)^k``; ``mapping`` holds sympy expressions
    in ``params``.
    """

    dim: int
    params: tuple
    mapping: tuple
    period: float = 2 * np.pi
    name: str = ""
    _f: object = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return len(self.params)

    def point(self, values):
        if self._f is None:
            self._f = sp.lambdify(self.params, list(self.mapping), "numpy")
        vals = np.atleast_2d(np.asarray(values, dtype=float))
        out = self._f(*[vals[:, i] for i in range(self.k)])
        return np.stack([np.asarray(c, dtype=float) * np.ones(vals.shape[0]) for c in out], axis=1)

    def restrict(self, form: Form) -> Form:
        return form.pullback(self.mapping, self.params)

    @classmethod
    def circle(cls, radius=1) -> "Submanifold":
        t = sp.Symbol("t", real=True)
        return cls(2, (t,), (radius * sp.cos(t), radius * sp.sin(t)), name=f"circle(r={radius})")

    @classmethod
    def clifford_torus(cls) -> "Submanifold":
        """``(cos a, sin a, cos b, sin b)``: Lagrangian for ``dx0^dx1 + dx2^dx3``."""
        a, b = sp.symbols("a b", real=True)
        return cls(4, (a, b), (sp.cos(a), sp.sin(a), sp.cos(b), sp.sin(b)), name="clifford")

    @classmethod
    def tilted_torus(cls) -> "Submanifold":
        """``(cos a, cos b, sin a, sin b)``: ``j^* (dx0^dx1 + dx2^dx3) = cos(a - b) da^db``."""
        a, b = sp.symbols("a b", real=True)
        return cls(4, (a, b), (sp.cos(a), sp.cos(b), sp.sin(a), sp.sin(b)), name="tilted")


def standard_symplectic(dim: int) -> Form:
    """``dx0^dx1 + dx2^dx3 + ...``."""
    return Form(dim, 2, {(2 * i, 2 * i + 1): 1 for i in range(dim // 2)})
