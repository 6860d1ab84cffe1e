import math

import numpy as np
import pytest

from hs2sd import PointSet

CURVATURES = [0.005, 0.05, 0.2, 1.0]


def ball_points(rng, n, dim, c, max_frac=0.9):
    """Uniform points in the ball of radius ``max_frac / sqrt(c)``."""
    v = rng.standard_normal((n, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    r = max_frac / math.sqrt(c) * rng.random(n) ** (1.0 / dim)
    return v * r[:, None]


def random_set(rng, n, dim, c, max_frac=0.9, sid=None):
    return PointSet(ball_points(rng, n, dim, c, max_frac), c, sid)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_LINES, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
