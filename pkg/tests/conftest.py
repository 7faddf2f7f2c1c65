import numpy as np
import pytest
from hypothesis import settings

from ccepanel import PanelDataset

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def make_panel(**columns):
    """Panel with units A, B, ... and years from 2000 out of equal-shape arrays."""
    first = np.asarray(next(iter(columns.values())), dtype=float)
    n, t = first.shape
    units = tuple(chr(ord("A") + i) for i in range(n))
    return PanelDataset(units, np.arange(2000, 2000 + t), columns)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def static_panel(rng):
    """y = a_i + 0.5 x1 - 0.3 x2 + e on a balanced 6 x 12 panel."""
    n, t = 6, 12
    x1 = rng.normal(size=(n, t))
    x2 = rng.normal(size=(n, t)) + 0.3 * x1
    a = rng.normal(size=(n, 1))
    y = a + 0.5 * x1 - 0.3 * x2 + 0.2 * rng.normal(size=(n, t))
    return make_panel(y=y, x1=x1, x2=x2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
