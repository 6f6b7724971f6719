import math

import numpy as np
import pytest
from hypothesis import settings

from fairpent.hexsplit import canonical_params

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SQRT3 = math.sqrt(3.0)


@pytest.fixture
def v0():
    return canonical_params()


@pytest.fixture
def v0_pentagon():
    """P1 of the unperturbed split, vertex order (a0, a1, x2, x3, a2)."""
    return np.array(
        [
            (0.0, 0.0),
            (SQRT3 / 2, (-3 + 2 * SQRT3) / 2),
            (0.5, SQRT3 / 2),
            (-0.5, SQRT3 / 2),
            ((-3 + SQRT3) / 2, (3 - SQRT3) / 2),
        ]
    )


@pytest.fixture
def regular_hexagon():
    return np.array([(math.cos(i * math.pi / 3), math.sin(i * math.pi / 3)) for i in range(6)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def equal_area_hexagon(regular_hexagon):
    """Factory: regular hexagon with vertices jittered by up to ``eps``, rescaled to area 3*sqrt(3)/2."""

    def make(rng, eps):
        d = rng.normal(size=(6, 2))
        d *= eps / np.hypot(d[:, 0], d[:, 1]).max()
        h = regular_hexagon + d
        x, y = h[:, 0], h[:, 1]
        area = 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
        c = h.mean(axis=0)
        return c + (h - c) * math.sqrt(1.5 * SQRT3 / area)

    return make


@pytest.fixture(scope="session")
def patch1():
    from fairpent.patch import generate_patch

    return generate_patch(rings=1, eps0=1e-3, seed=7)


@pytest.fixture(scope="session")
def ref0():
    from fairpent.patch import reference_patch

    return reference_patch(0)


@pytest.fixture(scope="session")
def ref1():
    from fairpent.patch import reference_patch

    return reference_patch(1)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
