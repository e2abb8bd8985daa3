import time

import numpy as np
import pytest

from src.utils import get_rng, quantize, quantize_up, random_vertices, stopwatch, unique_sorted


@pytest.mark.parametrize(
    "value, delta, expected",
    [(0.31, 0.1, 0.4), (0.3, 0.1, 0.3), (0.0, 0.5, 0.0), (1.2345, None, 1.2345), (1.2345, 0, 1.2345)],
)
def test_quantize_up(value, delta, expected):
    assert quantize_up(value, delta) == pytest.approx(expected)


def test_quantize_rounds_to_nearest():
    assert quantize(0.34, 0.1) == pytest.approx(0.3)
    assert quantize(0.36, 0.1) == pytest.approx(0.4)
    assert quantize(0.36, None) == 0.36


def test_unique_sorted_merges_neighbours():
    assert unique_sorted([3.0, 1.0, 1.0 + 1e-12, 2.0], 1e-9) == [1.0, 2.0, 3.0]
    assert unique_sorted([], 1e-9) == []


def test_random_vertices_shape(rng):
    walk = random_vertices(rng, 7)
    cloud = random_vertices(rng, 5, scale=2.0, walk=False)
    assert walk.shape == (7, 2)
    assert cloud.shape == (5, 2)
    assert np.all((cloud >= 0) & (cloud <= 2.0))


def test_get_rng_is_deterministic():
    assert get_rng(3).random() == get_rng(3).random()
    assert get_rng().random() == get_rng().random()


def test_stopwatch_measures_block():
    with stopwatch() as watch:
        time.sleep(0.01)
    assert watch["seconds"] >= 0.005
