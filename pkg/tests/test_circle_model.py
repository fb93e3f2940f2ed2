import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fukaya_torus import PlaneDiscModel, verify_circle_isotopy
from fukaya_torus.circle_model import circle_disc_rho, disc_b_integral, flux_pairing, swept_b_flux
from fukaya_torus.exceptions import InputParseError
from fukaya_torus.quadrature import line_integral, polar_integral, refine
from fukaya_torus.exceptions import QuadratureNotConverged


def test_polar_integral_gaussian():
    q = polar_integral(lambda x, y: np.exp(-x**2 - y**2), 0.0, 2.0)
    assert q.value == pytest.approx(math.pi * (1 - math.exp(-4)), abs=1e-12)


def test_refine_reports_non_convergence():
    with pytest.raises(QuadratureNotConverged):
        refine(lambda n: (-1) ** n / n if n % 3 else 1.0, 1e-30, max_levels=3)


def test_flux_is_minus_pi_delta_r_squared():
    flux, _ = flux_pairing(PlaneDiscModel(1.0, 2.0))
    assert flux == pytest.approx(-3 * math.pi, abs=1e-12)


def test_circle_isotopy_ratio():
    rep = verify_circle_isotopy(PlaneDiscModel(1.0, 2.0), alt_b="exp(-x**2 - y**2)")
    assert rep.passed
    assert rep.rel_error < 1e-12
    assert rep.predicted == pytest.approx(math.exp(-6 * math.pi**2), rel=1e-12)


def test_swept_b_flux_balances_annulus():
    m = PlaneDiscModel(1.0, 2.0, b="x**2 + 1")
    annulus = disc_b_integral(m, 2.0, inner=1.0).value
    assert swept_b_flux(m).value == pytest.approx(-annulus, abs=1e-11)


def test_custom_radius_path():
    m = PlaneDiscModel(1.0, 2.0, b="exp(-x**2 - y**2)", radius=lambda t: 1 + np.sin(np.pi * np.asarray(t) / 2),
                       dradius=lambda t: np.pi / 2 * np.cos(np.pi * np.asarray(t) / 2))
    assert verify_circle_isotopy(m).passed


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.3, 2.0), st.floats(-0.5, 0.5), st.floats(0, 1))
def test_ratio_independent_of_b_and_beta(r0, r1, c, beta):
    m = PlaneDiscModel(r0, r1, b=f"{c}*x*y + {c}", beta=beta)
    rep = verify_circle_isotopy(m, alt_b="x**2")
    assert rep.rel_error < 1e-9 and rep.b_independence_error < 1e-9


def test_holonomy_enters_disc_weight():
    m = PlaneDiscModel(1.0, 2.0, beta=0.25)
    assert circle_disc_rho(m) == pytest.approx(1j * math.exp(-2 * math.pi**2), rel=1e-12)


def test_model_validation():
    with pytest.raises(InputParseError):
        PlaneDiscModel(-1.0, 2.0)
    with pytest.raises(InputParseError):
        PlaneDiscModel(1.0, 2.0, b="z**2")
    with pytest.raises(InputParseError):
        PlaneDiscModel(1.0, 2.0, radius=lambda t: 1.0)


def test_line_integral():
    assert line_integral(np.cos, 0.0, math.pi / 2).value == pytest.approx(1.0, abs=1e-14)
