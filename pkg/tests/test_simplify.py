import math

import numpy as np
import pytest

from src.exceptions import EmptyGraphException
from src.geom import Polyline
from src.models import NodeKind, SimplificationAlgorithm, VertexMode
from src.simplify import (
    bicriteria_simplify,
    build_event_graph,
    candidate_points,
    curve_event_positions,
    eps_candidates,
    greedy_disk_simplify,
    imai_iri_simplify,
    min_eps_simplify,
    min_k_simplify,
    min_link_path,
    path_curve,
    shortcut_candidates,
)


def test_collinear_curve_collapses_to_one_link():
    curve = Polyline([(0, 0), (1, 0), (2, 0), (3, 0)])
    result = min_k_simplify(curve, 0.01)
    assert result.links == 1
    assert result.curve.start == curve.start and result.curve.end == curve.end


@pytest.mark.parametrize("eps, links", [(0.1, 4), (0.75, 2), (2.0, 1)])
def test_min_k_on_zigzag(zigzag, eps, links):
    result = min_k_simplify(zigzag, eps)
    assert result.links == links
    assert result.achieved_eps <= eps + 1e-6
    assert result.verify(zigzag)
    assert result.algorithm == SimplificationAlgorithm.MIN_K


def test_curve_mode_matches_input_mode_on_self_simplification(zigzag):
    a = min_k_simplify(zigzag, 0.75, VertexMode.INPUT_VERTICES)
    b = min_k_simplify(zigzag, 0.75, VertexMode.ONE_CURVE_VERTICES)
    assert a.links == b.links


def test_plane_mode_never_needs_more_links(random_curves):
    for curve in random_curves(5, 7):
        eps = 0.3
        plane = min_k_simplify(curve, eps, VertexMode.ANY_PLANE_POINT, delta=1e-6)
        vertices = min_k_simplify(curve, eps, VertexMode.INPUT_VERTICES)
        assert plane.links <= vertices.links
        assert plane.achieved_eps <= eps + 1e-6
        assert plane.event_count > 0


def test_event_graph_nodes_and_path(zigzag):
    graph = build_event_graph(zigzag, zigzag, 0.75)
    kinds = {node.kind for node in graph.nodes}
    assert NodeKind.SOURCE in kinds and NodeKind.SINK in kinds
    assert graph.event_count == len(candidate_points(zigzag, zigzag, 0.75, VertexMode.INPUT_VERTICES)[0])
    assert len(graph.sinks) == 1
    nodes = min_link_path(graph)
    assert nodes[0].kind == NodeKind.SOURCE
    assert nodes[-1].kind == NodeKind.SINK
    assert path_curve(nodes).start == zigzag.start
    assert path_curve(nodes).end == zigzag.end


def test_event_graph_blocked_endpoints():
    P = Polyline([(0, 0), (1, 0)])
    Q = Polyline([(0, 3), (1, 3)])
    with pytest.raises(EmptyGraphException):
        build_event_graph(P, Q, 1.0)


def test_negative_eps_rejected(zigzag):
    with pytest.raises(ValueError):
        build_event_graph(zigzag, zigzag, -0.1)


def test_shortcut_candidates(zigzag):
    assert len(shortcut_candidates(zigzag)) == math.comb(len(zigzag), 2)
    assert len(shortcut_candidates(zigzag, mode=VertexMode.ANY_PLANE_POINT)) > math.comb(len(zigzag), 2)


def test_candidate_points_modes(zigzag):
    other = zigzag.translated(0, 0.1)
    points, ordered = candidate_points(zigzag, zigzag, 0.5, VertexMode.INPUT_VERTICES)
    assert ordered and len(points) == len(zigzag)
    points, ordered = candidate_points(zigzag, other, 0.5, VertexMode.INPUT_VERTICES)
    assert not ordered and len(points) == 2 * len(zigzag)


def test_curve_event_positions_include_vertices(zigzag):
    positions = curve_event_positions(zigzag, 0.5, list(zigzag), delta=0.01)
    for i in range(len(zigzag)):
        assert float(i) in positions
    assert positions == sorted(positions)
    assert len(positions) > len(zigzag)


def test_eps_candidates_are_rounded_up():
    curve = Polyline([(0, 0), (1, 0), (1, 1.05)])
    values = eps_candidates(curve, 0.1)
    assert values[0] == 0
    assert all(v == pytest.approx(round(v / 0.1) * 0.1) for v in values)
    assert values == sorted(values)


def test_min_eps_respects_link_budget(zigzag):
    result = min_eps_simplify(zigzag, 1)
    assert result.links == 1
    assert result.achieved_eps == pytest.approx(1.0, abs=1e-6)
    assert result.achieved_eps <= result.target_eps + 1e-6
    assert result.algorithm == SimplificationAlgorithm.MIN_EPS
    with pytest.raises(ValueError):
        min_eps_simplify(zigzag, 0)


def test_bicriteria_guarantees(random_curves):
    for curve in random_curves(5, 8):
        eps = 0.4
        imai = imai_iri_simplify(curve, eps)
        result = bicriteria_simplify(curve, eps=eps, delta=1e-6)
        assert result.links <= imai.links
        assert result.achieved_eps <= eps + 1e-6
        assert result.algorithm == SimplificationAlgorithm.BICRITERIA


def test_bicriteria_stays_within_eps(zigzag):
    result = bicriteria_simplify(zigzag, eps=0.5, delta=1e-6)
    assert result.achieved_eps <= 0.5 + 1e-6
    assert result.links <= imai_iri_simplify(zigzag, 0.5).links
    assert result.event_count >= len(zigzag)


def test_bicriteria_rejects_zero_eps(zigzag):
    with pytest.raises(ValueError):
        bicriteria_simplify(zigzag, eps=0)


def test_vertex_restricted_heuristics_are_feasible(random_curves):
    for curve in random_curves(5, 8):
        eps = 0.5
        optimum = min_k_simplify(curve, eps)
        imai = imai_iri_simplify(curve, eps)
        greedy = greedy_disk_simplify(curve, eps)
        assert imai.achieved_eps <= eps + 1e-6
        assert greedy.achieved_eps <= eps + 1e-6
        assert optimum.links <= imai.links <= greedy.links
        assert np.allclose(imai.curve.vertices[[0, -1]], curve.vertices[[0, -1]])


def test_plane_event_count_is_the_merged_candidate_count(zigzag):
    result = min_k_simplify(zigzag, 0.5, VertexMode.ANY_PLANE_POINT, delta=0.01)
    assert result.event_count == len(curve_event_positions(zigzag, 0.5, list(zigzag), delta=0.01))
    graph = build_event_graph(zigzag, zigzag, 0.5, VertexMode.ANY_PLANE_POINT, delta=0.01)
    assert graph.event_count == result.event_count


def test_shortcut_endpoints_are_candidates(zigzag):
    other = zigzag.translated(0, 0.1)
    points, ordered = candidate_points(zigzag, other, 0.5, VertexMode.ANY_PLANE_POINT, delta=0.01)
    assert not ordered
    for segment in shortcut_candidates(zigzag, other, VertexMode.ANY_PLANE_POINT):
        for end in segment:
            assert np.min(np.hypot(*(points - np.asarray(end)).T)) <= 1e-9


def test_eps_candidates_include_vertex_shortcut_distances():
    curve = Polyline([(0, 0), (1, 1), (2, 0)])
    assert np.any(np.isclose(eps_candidates(curve, None), 1.0))


def test_min_eps_between_candidates():
    # the backtrack makes the optimum an equal-distance value, no vertex distance
    curve = Polyline([(0, 0), (2, 0), (1, 0), (3, 0)])
    assert not np.any(np.isclose(eps_candidates(curve, None), 0.5))
    result = min_eps_simplify(curve, 1)
    assert result.links == 1
    assert result.target_eps == pytest.approx(0.5, abs=1e-6)
    assert result.achieved_eps == pytest.approx(0.5, abs=1e-6)


def test_link_counts_are_monotone_in_eps(random_curves):
    sweep = [0.1, 0.2, 0.35, 0.5, 0.8, 1.2]
    for curve in random_curves(4, 7):
        links = [min_k_simplify(curve, eps).links for eps in sweep]
        assert links == sorted(links, reverse=True)
        imai = [imai_iri_simplify(curve, eps).links for eps in sweep]
        assert imai == sorted(imai, reverse=True)
