import numpy as np
import pytest
from hypothesis import given, settings

from src.exceptions import BudgetExceededException
from src.frechet import discrete_frechet, frechet_distance
from src.geom import Polyline
from src.models import OracleBudget, VertexMode
from src.oracle import (
    brute_force_discrete_frechet,
    brute_force_min_eps,
    brute_force_min_k,
    brute_force_pmean,
    exact_frechet_by_events,
    grid_points,
)
from src.pmean import exact_pmean_small, pairwise_pmean, simplify_then_pmean, two_curve_pmean
from src.simplify import bicriteria_simplify, min_eps_simplify, min_k_simplify
from src.utils import random_vertices

from .conftest import polylines


@settings(max_examples=60, deadline=None)
@given(polylines(max_size=6), polylines(max_size=6))
def test_discrete_frechet_matches_coupling_enumeration(P, Q):
    assert discrete_frechet(P, Q) == brute_force_discrete_frechet(P, Q)


def test_discrete_oracle_budget():
    big = Polyline([(i, i % 2) for i in range(9)])
    with pytest.raises(BudgetExceededException):
        brute_force_discrete_frechet(big, big)


def test_event_enumeration_agrees_with_bisection(rng):
    for _ in range(20):
        P = Polyline(random_vertices(rng, int(rng.integers(2, 6))))
        Q = Polyline(random_vertices(rng, int(rng.integers(2, 6))))
        assert exact_frechet_by_events(P, Q) == pytest.approx(frechet_distance(P, Q), abs=1e-6)


def test_min_k_matches_subset_enumeration(rng):
    for _ in range(25):
        P = Polyline(random_vertices(rng, 6))
        eps = float(rng.uniform(0.05, 1.0))
        assert min_k_simplify(P, eps).links == brute_force_min_k(P, eps)


def test_plane_oracle_is_at_most_vertex_oracle():
    P = Polyline([(0, 0), (1, 0.6), (2, 0), (3, 0.6)])
    eps = 0.35
    plane = brute_force_min_k(P, eps, VertexMode.ANY_PLANE_POINT, grid=0.1)
    assert plane <= brute_force_min_k(P, eps)
    assert plane >= 1


def test_min_k_oracle_budget():
    P = Polyline(random_vertices(np.random.default_rng(1), 10))
    with pytest.raises(BudgetExceededException):
        brute_force_min_k(P, 0.1)


def test_grid_points_budget():
    budget = OracleBudget(max_candidates=10)
    with pytest.raises(BudgetExceededException):
        grid_points((0, 0), (1, 1), 0.1, budget)
    assert grid_points((0, 0), (1, 1), 0.5, budget).shape == (9, 2)


def test_pmean_oracle_on_parallel_segments(parallel_pair):
    P, Q = parallel_pair
    assert brute_force_pmean([P, Q], "inf", k=1, grid=0.25) == pytest.approx(0.5, abs=1e-6)
    assert exact_pmean_small([P, Q], "inf", delta=0.01, k=1).cost <= 0.5 + 1e-6


def test_two_curve_mean_is_no_worse_than_grid_search():
    P = Polyline([(0, 0), (1, 1), (2, 0)])
    Q = Polyline([(0, 0.5), (2, 0.5)])
    grid_cost = brute_force_pmean([P, Q], "inf", k=2, grid=0.5)
    assert two_curve_pmean(P, Q, "inf").cost <= grid_cost + 1e-6


def test_pmean_oracle_budget(parallel_pair):
    P, Q = parallel_pair
    with pytest.raises(BudgetExceededException):
        brute_force_pmean([P, Q, P, Q], 2, budget=OracleBudget(max_curves=3))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_min_eps_matches_subset_enumeration(k):
    for seed in range(15):
        P = Polyline(random_vertices(np.random.default_rng(seed), 6))
        expected = brute_force_min_eps(P, k)
        assert min_eps_simplify(P, k).target_eps == pytest.approx(expected, abs=1e-6)


def test_min_eps_oracle_budget():
    P = Polyline(random_vertices(np.random.default_rng(1), 10))
    with pytest.raises(BudgetExceededException):
        brute_force_min_eps(P, 2)


def test_bicriteria_against_plane_oracle():
    checked = 0
    for seed in range(6):
        P = Polyline(random_vertices(np.random.default_rng(seed), 4))
        eps = 0.3
        try:
            optimum = brute_force_min_k(
                P, eps, VertexMode.ANY_PLANE_POINT, grid=0.25, budget=OracleBudget(max_checks=20000)
            )
        except BudgetExceededException:
            continue
        result = bicriteria_simplify(P, eps=2 * eps, delta=1e-6)
        assert result.links <= 2 * optimum
        assert result.achieved_eps <= 2 * eps + 1e-6
        checked += 1
    assert checked


@pytest.mark.parametrize("p", ["inf", 2])
def test_pairwise_within_three_times_grid_optimum(p):
    rng = np.random.default_rng(11)
    curves = [Polyline(random_vertices(rng, 3)) for _ in range(3)]
    optimum = brute_force_pmean(curves, p, k=1, grid=0.5)
    assert pairwise_pmean(curves, p).cost <= 3 * optimum + 1e-6


def test_simplify_then_mean_against_grid_optimum():
    # the midpoint of the simplifications loses at most twice the simplification error
    rng = np.random.default_rng(5)
    curves = [Polyline(random_vertices(rng, 4)) for _ in range(2)]
    optimum = brute_force_pmean(curves, "inf", k=2, grid=0.5)
    errors = [min_eps_simplify(curve, 2).achieved_eps for curve in curves]
    result = simplify_then_pmean(curves, "inf", k=2)
    alpha = max(errors) / optimum
    assert result.cost <= (2 * alpha + 1) * optimum + 1e-6
