import math
import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from honeycomb.geometry import Axis, ConvexPolygon  # noqa: E402

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

HSTAR_SIDE = math.sqrt(2.0 / (3.0 * math.sqrt(3.0)))


def random_polygon(rng: np.random.Generator, max_points: int = 12) -> ConvexPolygon:
    """Hull of a random cloud; retried until the hull is a proper polygon."""
    while True:
        k = int(rng.integers(3, max_points + 1))
        scale = rng.uniform(0.2, 3.0, 2)
        pts = rng.normal(size=(k, 2)) * scale + rng.uniform(-2, 2, 2)
        try:
            return ConvexPolygon.hull(pts)
        except Exception:
            continue


def random_axis(rng: np.random.Generator, near: ConvexPolygon | None = None) -> Axis:
    base = rng.normal(size=2) if near is None else near.vertices.mean(axis=0) + rng.normal(size=2)
    ang = rng.uniform(0, math.pi)
    return Axis(base, (math.cos(ang), math.sin(ang)))


@st.composite
def polygons(draw, max_points: int = 10):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_polygon(np.random.default_rng(seed), max_points)


@st.composite
def axes(draw):
    ang = draw(st.floats(0.0, math.pi, allow_nan=False))
    bx = draw(st.floats(-3, 3, allow_nan=False))
    by = draw(st.floats(-3, 3, allow_nan=False))
    return Axis((bx, by), (math.cos(ang), math.sin(ang)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def unit_square():
    return ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def centered_square():
    return ConvexPolygon([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(acceptance.RESULTS):
        terminalreporter.write_line(line)
