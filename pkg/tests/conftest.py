import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from fukaya_torus import Brane, CFElement, TorusAmbient

sys.path.insert(0, str(Path(__file__).parent))

# offsets that keep the four slope lines in general position
OFFSETS = [(Fraction(0), Fraction(0)), (Fraction(0), Fraction(1, 7)), (Fraction(0), Fraction(3, 11)), (Fraction(0), Fraction(2, 5))]


def slope_chain(count, holonomy=None, offsets=OFFSETS):
    """Branes ``l_0, l_1, ...`` (theta-slopes 0, -1, -2, ...) with generic offsets."""
    hol = holonomy or [0] * count
    return [Brane.slope(k, [offsets[k]], holonomy=[hol[k]], label=f"L{k}") for k in range(count)]


def unit_inputs(branes):
    return [CFElement.constant(branes[j], branes[j + 1]) for j in range(len(branes) - 1)]


def random_rational(rng, den=12):
    return Fraction(rng.randrange(den), den)


@pytest.fixture
def chain3():
    return slope_chain(3, [0, Fraction(1, 3), Fraction(1, 5)])


@pytest.fixture
def ambient():
    return TorusAmbient((1.0,), (0.25,))


@pytest.fixture
def rng():
    return random.Random(20261018)


# One line per acceptance criterion, printed at the end of the run.
ACCEPTANCE: dict = {}


def record(criterion: str, passed: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: (int(s.split()[0]), s)):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"criterion {name}: {'PASS' if ok else 'FAIL'}  {detail}")
