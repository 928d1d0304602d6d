import cmath

import numpy as np
import pytest

from cfpart import (
    Cauchy,
    Exponential,
    Lattice,
    Mixture,
    Normal,
    PointMass,
    ShiftScale,
    TwoPoint,
    Uniform,
)

CATALOG = {
    "point_mass": PointMass(1.5),
    "normal": Normal(0.0, 1.0),
    "normal_wide": Normal(0.5, 2.0),
    "exponential": Exponential(1.0),
    "uniform": Uniform(-1.0, 2.0),
    "cauchy": Cauchy(0.3, 1.0),
    "two_point": TwoPoint(-1.0, 0.5, 1.0),
    "two_point_skew": TwoPoint(0.3, 0.4, 2.1),
    "lattice": Lattice(1.0, (-1, 0, 2), (0.3, 0.3, 0.4)),
    "mixture": Mixture((0.3, 0.3, 0.4), (Normal(-1.0, 0.5), Exponential(2.0), TwoPoint(0.0, 0.5, 1.0))),
    "shift_scale": ShiftScale(Uniform(0.0, 1.0), 1.0, -2.0),
}

ATOMIC = {k: v for k, v in CATALOG.items() if v.atoms() is not None}


def exact_expectation(spec, g):
    """``E g(X)`` for a finite atomic law."""
    return sum(p * g(x) for x, p in spec.atoms())


def exact_j(spec, a, t):
    return exact_expectation(spec, lambda x: 0.5 * cmath.exp(1j * t * x) * np.sign(x - a))


@pytest.fixture(params=sorted(CATALOG))
def catalog_spec(request):
    return CATALOG[request.param]


@pytest.fixture
def acceptance_report(request):
    """Collects one line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_LINES, [])
    return lines.append


_LINES = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
