import numpy as np
import pytest
from hypothesis import strategies as st

from src.geom import Polyline, Tolerance
from src.utils import random_vertices

coordinates = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
points = st.tuples(coordinates, coordinates)


def polylines(min_size: int = 2, max_size: int = 6):
    """Polylines with well separated consecutive vertices"""
    return (
        st.lists(points, min_size=min_size, max_size=max_size, unique=True)
        .filter(lambda pts: all(np.hypot(a[0] - b[0], a[1] - b[1]) > 1e-3 for a, b in zip(pts, pts[1:])))
        .map(Polyline)
    )


@pytest.fixture
def tol():
    return Tolerance.default()


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def zigzag():
    return Polyline([(0, 0), (1, 1), (2, 0), (3, 1), (4, 0)])


@pytest.fixture
def parallel_pair():
    return Polyline([(0, 0), (1, 0)]), Polyline([(0, 1), (1, 1)])


@pytest.fixture
def random_curves(rng):
    def make(count: int, size: int):
        return [Polyline(random_vertices(rng, size)) for _ in range(count)]

    return make
