"""Command-line entry point: ``fukaya-torus <subcommand> ...``.

Every subcommand prints (or writes with ``--output``) a JSON document carrying
a ``"schema"`` field.  With ``--manifest`` a run manifest is written next to
it: tool version, argv, the parsed configuration, hashes of the input files,
tolerances, precision mode, wall-clock time and per-operation counts.  The
result document itself never contains timing data, so identical inputs give
byte-identical results.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .exceptions import (
    CocycleViolation,
    DegenerateMesh,
    FukayaTorusError,
    InputParseError,
    ParallelLines,
    PointNotOnLine,
)
from .flat_torus import TorusAmbient, as_fraction, parse_branes

PRECISION_ENV = "FUKAYA_TORUS_PRECISION"
SCHEMA = "fukaya-torus/{}/1"

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2
_INPUT_ERRORS = (InputParseError, ParallelLines, PointNotOnLine, DegenerateMesh, CocycleViolation)


class _Run:
    """Collects what goes into the manifest while a subcommand runs."""

    def __init__(self, args):
        self.args = args
        self.inputs: dict = {}
        self.counts: dict = {}
        self.tolerances: dict = {}

    def load(self, path: str, what: str):
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputParseError(f"{what}: cannot read {path}: {exc.strerror}") from exc
        self.inputs[what] = {"path": path, "sha256": hashlib.sha256(raw).hexdigest()}
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputParseError(f"{what} ({path}): invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _complex(v) -> complex:
    if isinstance(v, dict):
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def _ambient(data, n: int) -> TorusAmbient:
    if data is None:
        return TorusAmbient.standard(n)
    amb = TorusAmbient.from_dict(data)
    if amb.n != n:
        raise InputParseError(f"ambient has n = {amb.n} but the branes have n = {n}")
    return amb


def _branes_and_ambient(run: _Run, path: str, ambient_path: str | None, count: int | None = None):
    data = run.load(path, "branes")
    branes = parse_branes(data)
    if count is not None and len(branes) != count:
        raise InputParseError(f"branes: expected {count} branes, got {len(branes)}")
    amb_data = data.get("ambient") if isinstance(data, dict) else None
    if ambient_path:
        amb_data = run.load(ambient_path, "ambient")
    return branes, _ambient(amb_data, branes[0].n)


def parse_inputs(data, branes) -> list:
    """Morphisms ``rho_j in CF(b_{j-1}, b_j)`` from JSON.

    Each entry is ``{"constant": c}`` (every generator gets ``c``) or
    ``{"coefficients": [{"generator": ["x", "y", ...], "coefficient": {"re": .., "im": ..}}]}``.
    """
    from .ainfinity import CFElement

    if isinstance(data, dict) and "inputs" in data:
        data = data["inputs"]
    if not isinstance(data, list) or len(data) != len(branes) - 1:
        raise InputParseError(f"inputs: expected a list of {len(branes) - 1} morphisms")
    out = []
    for j, item in enumerate(data, start=1):
        src, tgt = branes[j - 1], branes[j]
        try:
            if "constant" in item:
                out.append(CFElement.constant(src, tgt, _complex(item["constant"])))
                continue
            coeffs = {}
            for entry in item["coefficients"]:
                xs = [as_fraction(x) for x in entry["generator"]]
                if len(xs) != 2 * src.n:
                    raise InputParseError(f"generator {entry['generator']} needs {2 * src.n} coordinates")
                pt = tuple((xs[2 * f], xs[2 * f + 1]) for f in range(src.n))
                coeffs[pt] = _complex(entry["coefficient"])
            out.append(CFElement(src, tgt, coeffs))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputParseError(f"inputs[{j - 1}]: {exc}") from exc
    return out


def _precision(args) -> int | None:
    if args.precision is not None:
        return args.precision
    env = os.environ.get(PRECISION_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InputParseError(f"{PRECISION_ENV} must be an integer number of digits") from exc
    return None


def _k_range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    except ValueError as exc:
        raise InputParseError(f"--k-range expects 'lo..hi', got {text!r}") from exc


# ----------------------------------------------------------------------------
# Subcommands. Each returns (result dict, passed flag).
# ----------------------------------------------------------------------------


def cmd_hom(run: _Run, args):
    from .grading import hom_space_dict

    branes, _ = _branes_and_ambient(run, args.branes, None, 2)
    out = hom_space_dict(*branes)
    run.counts["generators"] = len(out["generators"])
    return out, True


def cmd_mu(run: _Run, args):
    from .ainfinity import mu_with_report

    branes, amb = _branes_and_ambient(run, args.branes, args.ambient, args.k + 1)
    inputs = parse_inputs(run.load(args.inputs, "inputs"), branes)
    run.tolerances["tol"] = args.tol
    rep = mu_with_report(args.k, branes, inputs, amb, args.tol, max_cutoff=Fraction(args.max_cutoff),
                         precision=_precision(args), threads=args.threads)
    run.counts.update(classes_used=rep.classes_used, families=rep.families, output_generators=len(rep.element.generators()))
    body = rep.element.to_dict()
    body.update(tail_bound=rep.tail_bound, tol=args.tol, classes_used=rep.classes_used, area_cutoff=str(rep.cutoff))
    return body, True


def cmd_assoc(run: _Run, args):
    from .ainfinity import associativity_check

    branes, amb = _branes_and_ambient(run, args.branes, args.ambient, 4)
    inputs = parse_inputs(run.load(args.inputs, "inputs"), branes)
    run.tolerances["tol"] = args.tol
    rep = associativity_check(branes, inputs, amb, args.tol)
    run.tolerances["combined"] = rep.tolerance
    return rep.to_dict(), rep.passed


def cmd_isotopy(run: _Run, args):
    from .isotopy import LineIsotopy, verify_isotopy_theorem

    data = run.load(args.scenario, "scenario")
    try:
        branes = parse_branes(data["branes"])
        amb = _ambient(data.get("ambient"), branes[0].n)
        inputs = parse_inputs(data["inputs"], branes)
        iso = LineIsotopy.from_dict(data["isotopy"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputParseError(f"scenario: {exc}") from exc
    flux = args.flux or data.get("flux", "constant")
    tol = args.tol if args.tol is not None else float(data.get("tol", 1e-10))
    run.tolerances["tol"] = tol
    rep = verify_isotopy_theorem(branes, inputs, iso, amb, tol=tol, flux=flux)
    run.counts["classes"] = len(rep.rows)
    return rep.to_dict(), rep.passed


def cmd_circle(run: _Run, args):
    from .circle_model import PlaneDiscModel, verify_circle_isotopy

    model = PlaneDiscModel(args.r0, args.r1, args.b, args.beta, tol=args.quad_tol)
    run.tolerances.update(tol=args.tol, quadrature=args.quad_tol)
    rep = verify_circle_isotopy(model, args.tol, alt_b=args.alt_b)
    out = rep.to_dict()
    out["model"] = {"r0": args.r0, "r1": args.r1, "b": args.b, "alt_b": args.alt_b, "beta": args.beta}
    return out, rep.passed


def cmd_stokes(run: _Run, args):
    from . import relative_derham as rd

    levels = range(args.levels)
    run.tolerances["min_order"] = args.min_order
    if args.counterexample:
        study = rd.counterexample_study(levels)
        out = {"counterexample": {name: [{"level": lv, "difference": d} for lv, d in rows] for name, rows in study.items()}}
        tilted = [d for _, d in study["tilted"]]
        out["tilted_min_difference"] = min(tilted)
        passed = min(tilted) > 1e-3
        run.counts["levels"] = len(levels)
        return out, passed
    c = rd.disc_model_cocycle(args.cocycle)
    if args.family == "pl":
        z0 = lambda lv: rd.pl_from_smooth(rd.disc_cycle(0, lv))  # noqa: E731
        z1 = lambda lv: rd.pl_from_smooth(rd.disc_cycle(1, lv))  # noqa: E731
    else:
        z0 = lambda lv: rd.disc_cycle(0, lv, args.family)  # noqa: E731
        z1 = lambda lv: rd.disc_cycle(1, lv, args.family)  # noqa: E731
    rep = rd.stokes_invariance_report(c, z0, z1, levels, gauge=rd.disc_model_gauge(), min_order=args.min_order,
                                      raise_on_fail=False, label=f"{args.family}/{args.cocycle}")
    if not args.quiet:
        print(rep.table(), file=sys.stderr)
    run.counts["triangles_finest"] = rep.rows[-1].elements if rep.rows else 0
    return rep.to_dict(), rep.passed


def cmd_grading_table(run: _Run, args):
    from .grading import grading_table

    rows = grading_table(args.n, _k_range(args.k_range))
    run.counts["rows"] = len(rows)
    return {"n": args.n, "rows": [{"k0": a, "k1": b, "degree": d} for a, b, d in rows]}, True


COMMANDS = {
    "hom": cmd_hom,
    "mu": cmd_mu,
    "assoc": cmd_assoc,
    "isotopy": cmd_isotopy,
    "circle": cmd_circle,
    "stokes": cmd_stokes,
    "grading-table": cmd_grading_table,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the result JSON here instead of stdout")
    common.add_argument("--manifest", help="write the run manifest JSON here")
    common.add_argument("--threads", type=int, default=1, help="worker cap (results do not depend on it)")
    common.add_argument("--precision", type=int, default=None,
                        help=f"decimal digits for high-precision summation (default: ${PRECISION_ENV} or double)")

    p = argparse.ArgumentParser(prog="fukaya-torus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("hom", parents=[common], help="generators of CF(b0, b1) by degree")
    s.add_argument("--branes", required=True)

    s = sub.add_parser("mu", parents=[common], help="mu^k with a tail bound")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--branes", required=True)
    s.add_argument("--inputs", required=True)
    s.add_argument("--ambient")
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--max-cutoff", type=int, default=4096)

    s = sub.add_parser("assoc", parents=[common], help="compare the two mu^2 association orders")
    s.add_argument("--branes", required=True)
    s.add_argument("--inputs", required=True)
    s.add_argument("--ambient")
    s.add_argument("--tol", type=float, default=1e-12)

    s = sub.add_parser("isotopy", parents=[common], help="weight transformation under a brane translation")
    s.add_argument("--scenario", required=True)
    s.add_argument("--flux", choices=["constant", "tracked"])
    s.add_argument("--tol", type=float)

    s = sub.add_parser("circle", parents=[common], help="radially moved circle in the plane")
    s.add_argument("--r0", type=float, default=1.0)
    s.add_argument("--r1", type=float, default=2.0)
    s.add_argument("--b", default="0", help="B-field coefficient b(x, y)")
    s.add_argument("--alt-b", default="exp(-x**2 - y**2)", help="second B-field for the independence check")
    s.add_argument("--beta", type=float, default=0.0)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--quad-tol", type=float, default=1e-12)

    s = sub.add_parser("stokes", parents=[common], help="refinement study of the relative pairing")
    s.add_argument("--family", choices=["bump", "reparam", "pl"], default="bump")
    s.add_argument("--cocycle", choices=["generic", "area"], default="generic")
    s.add_argument("--levels", type=int, default=4)
    s.add_argument("--min-order", type=float, default=2.0)
    s.add_argument("--counterexample", action="store_true", help="run the non-Lagrangian study instead")
    s.add_argument("--quiet", action="store_true", help="do not print the table to stderr")

    s = sub.add_parser("grading-table", parents=[common], help="degrees of (l_k0, l_k1)")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--k-range", default="-3..3")
    return p


def _dump(obj) -> str:
    def default(o):
        if isinstance(o, Fraction):
            return str(o)
        if isinstance(o, complex):
            return {"re": o.real, "im": o.imag}
        if isinstance(o, tuple):
            return list(o)
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return json.dumps(obj, indent=2, sort_keys=True, default=default, allow_nan=True) + "\n"


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _join_ranges(argv: list) -> list:
    """``--k-range -3..3`` -> ``--k-range=-3..3`` (argparse would read ``-3..3`` as a flag)."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--k-range" and i + 1 < len(argv):
            out.append(f"--k-range={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = _join_ranges(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    run = _Run(args)
    start = time.perf_counter()
    try:
        if args.threads < 1:
            raise InputParseError("--threads must be at least 1")
        body, passed = COMMANDS[args.command](run, args)
        status = EXIT_OK if passed else EXIT_MISMATCH
    except (_INPUT_ERRORS + (json.JSONDecodeError,)) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotImplementedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FukayaTorusError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        body = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("achieved_bound", "worst", "order"):
            if hasattr(exc, attr):
                body[attr] = getattr(exc, attr)
        status = EXIT_MISMATCH
    body = {"schema": SCHEMA.format(args.command), **body, "passed": status == EXIT_OK}
    _write(args.output, _dump(body))
    if args.manifest:
        config = {k: v for k, v in vars(args).items() if k not in ("output", "manifest")}
        manifest = {
            "schema": SCHEMA.format("manifest"),
            "tool_version": __version__,
            "argv": argv,
            "config": config,
            "inputs": run.inputs,
            "tolerances": run.tolerances,
            "precision": {"mode": "double" if _precision(args) is None else "mpmath", "digits": _precision(args)},
            "wall_clock_s": round(time.perf_counter() - start, 6),
            "counts": run.counts,
            "exit_status": status,
        }
        _write(args.manifest, _dump(manifest))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
