import math

import numpy as np
import pytest
from hypothesis import given, settings

from src.exceptions import InfeasibleException
from src.frechet import (
    build_fsd,
    critical_values,
    decide_frechet,
    discrete_frechet,
    equal_distance_values,
    frechet_distance,
    frechet_matching,
    reachable_frontier,
    segment_frechet_decision,
)
from src.geom import Polyline
from src.utils import random_vertices

from .conftest import polylines


@pytest.mark.parametrize(
    "P, Q, expected",
    [
        ([(0, 0), (1, 0)], [(0, 1), (1, 1)], 1.0),
        ([(0, 0), (1, 0), (2, 0)], [(0, 0), (1, 1), (2, 0)], 1.0),
        ([(0, 0), (4, 0)], [(0, 0), (1, 1), (2, 0), (3, 1), (4, 0)], 1.0),
        ([(0, 0), (2, 0)], [(0, 0), (2, 0), (1, 0), (2, 0)], 0.5),
    ],
)
def test_frechet_distance_known_values(P, Q, expected):
    assert frechet_distance(Polyline(P), Polyline(Q)) == pytest.approx(expected, abs=1e-6)


def test_frechet_distance_of_identical_curves_is_zero(zigzag):
    assert frechet_distance(zigzag, zigzag) == pytest.approx(0.0, abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(polylines(max_size=5), polylines(max_size=5))
def test_frechet_distance_properties(P, Q):
    value = frechet_distance(P, Q)
    assert value == pytest.approx(frechet_distance(Q, P), abs=1e-6)
    assert value >= max(math.dist(P.start, Q.start), math.dist(P.end, Q.end)) - 1e-9
    assert value <= discrete_frechet(P, Q) + 1e-6
    assert decide_frechet(P, Q, value + 1e-6)


def test_decide_frechet_threshold():
    P = Polyline([(0, 0), (1, 0), (2, 0)])
    Q = Polyline([(0, 0), (1, 1), (2, 0)])
    assert not decide_frechet(P, Q, 0.99)
    assert decide_frechet(P, Q, 1.01)
    assert not decide_frechet(P, Q, -1)


def test_free_space_diagram_shape():
    P = Polyline([(0, 0), (1, 0), (2, 0)])
    Q = Polyline([(0, 0), (1, 1), (2, 1), (3, 0)])
    fsd = build_fsd(P, Q, 1.5)
    assert fsd.shape == (2, 3)
    assert fsd.start_free and fsd.end_free
    assert len(fsd.vertical) == 3 and len(fsd.vertical[0]) == 3
    assert len(fsd.horizontal) == 2 and len(fsd.horizontal[0]) == 4
    cell = fsd.cell(0, 0)
    assert cell.i == 0 and cell.j == 0


def test_reachable_frontier_blocked():
    P = Polyline([(0, 0), (1, 0)])
    Q = Polyline([(0, 5), (1, 5)])
    assert all(interval is None for interval in reachable_frontier(P, Q, 1.0))


def test_frechet_matching_is_monotone_and_within_eps():
    P = Polyline([(0, 0), (1, 0), (2, 0)])
    Q = Polyline([(0, 0), (1, 1), (2, 0)])
    matching = frechet_matching(P, Q, 1.0 + 1e-9)
    assert matching.max_distance <= 1.0 + 1e-6
    assert matching.s_values[0] == 0 and matching.t_values[0] == 0
    assert matching.s_values[-1] == pytest.approx(P.length)
    assert matching.t_values[-1] == pytest.approx(Q.length)
    assert all(a <= b for a, b in zip(matching.s_values, matching.s_values[1:]))
    assert all(a <= b for a, b in zip(matching.t_values, matching.t_values[1:]))


def test_frechet_matching_infeasible():
    P = Polyline([(0, 0), (1, 0)])
    Q = Polyline([(0, 1), (1, 1)])
    with pytest.raises(InfeasibleException):
        frechet_matching(P, Q, 0.5)


def test_critical_values_contain_endpoint_distances():
    P = Polyline([(0, 0), (1, 0)])
    Q = Polyline([(0, 2), (1, 3)])
    values = critical_values(P, Q)
    assert np.any(np.isclose(values, 2.0))
    assert np.any(np.isclose(values, 3.0))


def test_discrete_frechet_example():
    P = [[1, 1], [2, 1], [2, 2]]
    Q = [[2, 2], [0, 1], [2, 4]]
    assert discrete_frechet(P, Q) == 2.0


def test_discrete_frechet_single_vertices():
    assert discrete_frechet([(0, 0)], [(3, 4)]) == 5.0
    assert discrete_frechet([(0, 0)], [(0, 1), (0, 2)]) == 2.0


@pytest.mark.parametrize(
    "points, eps, expected",
    [
        ([(0, 0), (1, 0.5), (2, 0)], 0.5, True),
        ([(0, 0), (1, 0.5), (2, 0)], 0.4, False),
        ([(0, 0), (2, 0), (1, 0), (2, 0)], 0.6, True),
        ([(0, 0), (2, 0), (1, 0), (2, 0)], 0.4, False),
        ([(0.5, 0), (2, 0)], 0.4, False),
    ],
)
def test_segment_frechet_decision(points, eps, expected):
    assert segment_frechet_decision((0, 0), (2, 0), np.array(points, dtype=float), eps) is expected


def test_equal_distance_values():
    A = np.array([(0, 0), (2, 0)])
    B = np.array([(0, 1), (2, 3)])
    assert equal_distance_values(A, B) == pytest.approx([math.sqrt(5)])
    assert len(equal_distance_values(A, np.array([(1, -1), (1, 1)]))) == 0


def test_frechet_distance_snaps_to_equal_distance_value():
    P = Polyline([(0, 0), (2, 0)])
    Q = Polyline([(0, 0), (2, 0), (1, 0), (2, 0)])
    assert frechet_distance(P, Q) == pytest.approx(0.5, abs=1e-12)
    assert np.any(np.isclose(critical_values(P, Q), 0.5, atol=1e-12))


@settings(max_examples=25, deadline=None)
@given(polylines(max_size=4), polylines(max_size=4), polylines(max_size=4))
def test_frechet_triangle_inequality(P, Q, R):
    assert frechet_distance(P, R) <= frechet_distance(P, Q) + frechet_distance(Q, R) + 1e-6


def test_decide_frechet_is_monotone_in_eps(rng):
    sweep = np.linspace(0.0, 3.0, 16)
    for _ in range(20):
        P = Polyline(random_vertices(rng, 4))
        Q = Polyline(random_vertices(rng, 5))
        answers = [decide_frechet(P, Q, eps) for eps in sweep]
        assert answers == sorted(answers)
