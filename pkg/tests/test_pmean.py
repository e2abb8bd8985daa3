import math

import numpy as np
import pytest

from src.exceptions import InstanceTooLargeException
from src.fields import PExponent
from src.geom import Polyline
from src.models import ChunkOperation, PMeanAlgorithm
from src.pmean import (
    chunk_bounds,
    chunked_pmean,
    enclosing_circle,
    exact_pmean_small,
    lp_center,
    lp_norm_frechet,
    pairwise_pmean,
    simplify_then_pmean,
    two_curve_pmean,
)
from src.utils import random_vertices


@pytest.mark.parametrize(
    "points, p, expected",
    [
        ([(3, 4)], 2, (3, 4)),
        ([(0, 0), (2, 2)], 7, (1, 1)),
        ([(0, 0), (2, 0), (1, 3)], 2, (1, 1)),
        ([(0, 0), (1, 0), (1, 1), (0, 1)], "inf", (0.5, 0.5)),
        ([(0, 0), (2, 0), (1, 0.1)], "inf", (1, 0)),
        ([(0, 0), (1, 0), (5, 0)], 1, (1, 0)),
        ([(0, 0), (2, 0), (1, math.sqrt(3))], 3, (1, math.sqrt(3) / 3)),
    ],
)
def test_lp_center(points, p, expected):
    assert lp_center(points, PExponent(p)) == pytest.approx(expected, abs=1e-5)


def test_lp_center_needs_points():
    with pytest.raises(ValueError):
        lp_center([], 2)


def test_enclosing_circle_contains_every_point(rng):
    points = rng.uniform(-5, 5, size=(40, 2))
    x, y, r = enclosing_circle(points, seed=3)
    assert np.all(np.hypot(points[:, 0] - x, points[:, 1] - y) <= r + 1e-9)
    # at least two points on the boundary
    assert np.sum(np.isclose(np.hypot(points[:, 0] - x, points[:, 1] - y), r)) >= 2


def test_two_curve_mean_of_parallel_segments(parallel_pair):
    P, Q = parallel_pair
    result = two_curve_pmean(P, Q, 2)
    assert result.curve.start == pytest.approx((0, 0.5))
    assert result.curve.end == pytest.approx((1, 0.5))
    assert np.allclose(result.curve.vertices[:, 1], 0.5)
    assert result.per_curve_distance == pytest.approx([0.5, 0.5], abs=1e-6)
    assert result.cost == pytest.approx(math.sqrt(0.5), abs=1e-6)
    assert result.algorithm == PMeanAlgorithm.TWO_CURVE_EXACT
    assert result.verify([P, Q])


def test_two_curve_mean_at_infinity_is_half_the_distance(random_curves):
    P, Q = random_curves(2, 5)
    result = two_curve_pmean(P, Q, "inf")
    half = lp_norm_frechet(P, [Q], 1) / 2
    assert result.cost == pytest.approx(half, abs=1e-6)


def test_pairwise_selects_the_central_curve():
    curves = [Polyline([(0, y), (1, y)]) for y in (0, 1, 5)]
    result = pairwise_pmean(curves, 2)
    assert result.selected_index == 1
    assert result.curve == curves[1]
    assert result.cost == pytest.approx(math.sqrt(17), abs=1e-6)
    assert result.algorithm == PMeanAlgorithm.PAIRWISE


def test_pairwise_with_link_budget(zigzag):
    curves = [zigzag, zigzag.translated(0, 0.2), zigzag.translated(0, 0.4)]
    result = pairwise_pmean(curves, 2, k=1)
    assert result.selected_index == 1
    assert len(result.curve) == 2


def test_simplify_then_mean(zigzag):
    result = simplify_then_pmean([zigzag, zigzag.translated(0, 1)], 2, k=1)
    assert result.per_curve_distance == pytest.approx([0.5, 1.5], abs=1e-6)
    assert result.algorithm == PMeanAlgorithm.SIMPLIFY_THEN_MEAN


@pytest.mark.parametrize("p, cost", [("inf", 0.5), (2, math.sqrt(0.5))])
def test_exact_mean_of_parallel_segments(parallel_pair, p, cost):
    result = exact_pmean_small(list(parallel_pair), p, delta=0.01, k=1)
    assert result.cost == pytest.approx(cost, abs=1e-6)
    assert len(result.curve) == 2
    assert result.eps_vector == pytest.approx([0.5, 0.5])
    assert result.algorithm == PMeanAlgorithm.EXACT_SMALL


def test_exact_mean_refuses_large_instances(parallel_pair):
    P, Q = parallel_pair
    with pytest.raises(InstanceTooLargeException):
        exact_pmean_small([P, Q, P.translated(0, 2), Q.translated(0, 2)], 2, delta=0.1, k=1)


@pytest.mark.parametrize(
    "n, size, expected",
    [(10, 4, [0, 3, 6, 9]), (5, 30, [0, 4]), (2, 2, [0, 1]), (8, 4, [0, 3, 6, 7])],
)
def test_chunk_bounds(n, size, expected):
    assert chunk_bounds(n, size) == expected


def test_chunk_bounds_rejects_tiny_chunks():
    with pytest.raises(ValueError):
        chunk_bounds(10, 1)


@pytest.mark.parametrize("operation", [ChunkOperation.BICRITERIA, ChunkOperation.IMAI_IRI])
def test_chunked_simplification(rng, operation):
    curve = Polyline(random_vertices(rng, 20))
    result = chunked_pmean([curve], chunk_size=6, eps=0.3, delta=1e-6, operation=operation)
    assert np.allclose(result.curve.vertices[[0, -1]], curve.vertices[[0, -1]])
    assert result.per_curve_distance[0] <= result.error_bound + 1e-6
    assert result.algorithm == PMeanAlgorithm.CHUNKED


def test_chunked_mean_of_translated_copies(rng):
    P = Polyline(random_vertices(rng, 12))
    Q = P.translated(0, 1)
    result = chunked_pmean([P, Q], chunk_size=5, operation=ChunkOperation.MEAN)
    assert result.per_curve_distance == pytest.approx([0.5, 0.5], abs=1e-6)


def test_chunked_argument_checks(zigzag):
    with pytest.raises(ValueError):
        chunked_pmean([zigzag], eps=0.1, operation=ChunkOperation.MEAN)
    with pytest.raises(ValueError):
        chunked_pmean([zigzag, zigzag], eps=0.1, operation=ChunkOperation.BICRITERIA)
    with pytest.raises(ValueError):
        chunked_pmean([zigzag], operation=ChunkOperation.BICRITERIA)


def test_exact_mean_of_three_parallel_segments():
    curves = [Polyline([(0, y), (1, y)]) for y in (0, 1, 2)]
    result = exact_pmean_small(curves, "inf", delta=0.01, k=1)
    assert result.cost == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(result.curve.vertices[:, 1], 1.0, atol=1e-6)
    assert result.eps_vector == pytest.approx([1.0, 1.0, 1.0])


@pytest.mark.parametrize("p", [1, 2, 4, "inf"])
def test_midpoint_curve_halves_the_distance(random_curves, p):
    for P, Q in zip(random_curves(3, 5), random_curves(3, 4)):
        distance = lp_norm_frechet(P, [Q], 1)
        result = two_curve_pmean(P, Q, p)
        assert max(result.per_curve_distance) <= distance / 2 + 1e-6
        exponent = -1.0 if p == "inf" else 1 / PExponent(p) - 1
        assert result.cost <= 2 ** exponent * distance + 1e-6


def test_chunked_distance_within_the_summed_bound(rng):
    for _ in range(20):
        curve = Polyline(random_vertices(rng, 9))
        result = chunked_pmean([curve], chunk_size=4, eps=0.3, delta=1e-6, operation=ChunkOperation.IMAI_IRI)
        assert result.per_curve_distance[0] <= result.error_bound + 1e-6
