"""Exact Floer-theoretic computations on flat symplectic tori with B-fields."""

__version__ = "0.1.0"

from .exceptions import *  # noqa: F401,F403
from .flat_torus import (
    AffineLine,
    Brane,
    Generator,
    TorusAmbient,
    arc_parameter,
    intersect,
    intersect_lines,
)
from .grading import clockwise_gap, degree, expected_dimension, grading_table, hom_space, phase, serre_pair


from .ainfinity import CFElement, associativity_check, class_weight, mu, mu_with_report, tail_bound
from .circle_model import PlaneDiscModel, verify_circle_isotopy
from .isotopy import (
    LineIsotopy,
    is_exact,
    predicted_weight_ratio,
    theta_psi,
    transported_morphisms,
    verify_isotopy_theorem,
)
from .polygons import PolygonClass, class_geometry, enumerate_classes, holomorphic_count
from .relative_derham import RelCocycle, RelCycle, gauge_shift, rel_pairing, stokes_invariance_report
