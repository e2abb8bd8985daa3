"""Event graphs over the free space and the simplifiers built on them.

A node of the event graph is a *candidate* plane point together with one
matched position per reference curve. An edge c -> c' exists when the segment
between the two plane points can be matched to every reference sub-curve
within that reference's error; the arrival position on each reference is the
lowest reachable point of a connected free component of c'. Edges cost 0 when
they continue the incoming direction and 1 otherwise, so the 0/1 shortest
path from a source to a sink counts the links of the cheapest curve.

Storing the plane point on each node keeps every graph edge a straight
segment in the plane, so no axis rescaling of the diagram is needed.
"""

import itertools
import logging
import math
from collections import defaultdict, deque
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import EmptyGraphException, SimplificationFailedException, UnreachableException
from .frechet import frechet_distance, propagate_cell, segment_frechet_decision, vertex_edge_distances
from .geom import (
    Point,
    Polyline,
    Segment,
    Tolerance,
    ball_edges_intersection,
    balls_segment_intersection,
    collinear_continuation,
    ray_segment_intersection,
    reflect_direction,
    same_direction,
    unit_direction,
)
from .models import (
    EventEdge,
    EventGraph,
    EventNode,
    NodeKind,
    SimplificationAlgorithm,
    SimplificationResult,
    VertexMode,
)
from .utils import quantize, quantize_up, settings_lib, unique_sorted

logger = logging.getLogger(__name__)

__all__ = [
    "shortcut_candidates",
    "candidate_points",
    "curve_event_positions",
    "build_reference_graph",
    "build_event_graph",
    "min_link_path",
    "path_curve",
    "min_k_simplify",
    "eps_candidates",
    "min_eps_simplify",
    "bicriteria_simplify",
    "greedy_disk_simplify",
    "imai_iri_simplify",
]

Reference = Tuple[Polyline, float]


def _first_ray_hit(
    origin: Sequence[float], direction: Sequence[float], curve: Polyline, first_edge: int, tol: Tolerance
) -> Optional[Tuple[int, float, float]]:
    """Closest hit (edge, u, t) of a ray with the edges of ``curve`` from ``first_edge`` on"""
    best = None
    for edge in range(first_edge, curve.n_edges):
        hit = ray_segment_intersection(origin, direction, curve.edge(edge), tol)
        if hit is not None and (best is None or hit[0] < best[1] - tol.abs_tol):
            best = (edge, hit[0], hit[1])
    return best


def _extension_hits(curve: Polyline, tol: Tolerance) -> List[Tuple[int, int, float, Optional[float]]]:
    """Crossings of the shortcut extensions of ``curve`` with its own later edges.

    For every pair a < b the ray P[a] -> P[b] is followed past P[b] to its
    first hit, and once more after reflecting on the hit edge.

    Returns:
        List[Tuple[int, int, float, Optional[float]]]: (a, b, first hit, reflected hit)
            with hits as global positions on the curve
    """
    hits = []
    for a in range(len(curve)):
        for b in range(a + 1, len(curve)):
            direction = unit_direction(curve[a], curve[b])
            if direction is None:
                continue
            first = _first_ray_hit(curve[b], direction, curve, b, tol)
            if first is None:
                continue
            edge, _, t = first
            second_x = None
            reflected = reflect_direction(direction, curve.edge(edge))
            if reflected is not None and not same_direction(reflected, direction, tol):
                second = _first_ray_hit(curve.point_at(edge + t), reflected, curve, edge + 1, tol)
                if second is not None:
                    second_x = second[0] + second[2]
            hits.append((a, b, edge + t, second_x))
    return hits


def shortcut_candidates(
    P: Polyline, Q: Optional[Polyline] = None, mode: VertexMode = VertexMode.INPUT_VERTICES, tol: Optional[Tolerance] = None
) -> List[Segment]:
    """Shortcut segments an event graph may use.

    InputVertices: every pair of allowed vertices (P's, plus Q's when Q differs).
    OneCurveVertices: pairs of P's vertices. AnyPlanePoint: P's vertex pairs
    plus the extensions of each shortcut past its end vertex up to the first
    crossing, and the reflected continuation from that crossing.
    """
    tol = tol or Tolerance.default()
    points = list(P)
    if mode == VertexMode.INPUT_VERTICES and Q is not None and Q != P:
        points += [q for q in Q if q not in points]
    segments = [Segment(a, b) for a, b in itertools.combinations(points, 2)]
    if mode != VertexMode.ANY_PLANE_POINT:
        return segments
    for curve in (P,) if Q is None or Q == P else (P, Q):
        for _, b, first_x, second_x in _extension_hits(curve, tol):
            crossing = curve.point_at(first_x)
            segments.append(Segment(curve[b], crossing))
            if second_x is not None:
                segments.append(Segment(crossing, curve.point_at(second_x)))
    return segments


def curve_event_positions(
    curve: Polyline,
    eps: float,
    centres: Iterable[Sequence[float]],
    delta: Optional[float] = None,
    tol: Optional[Tolerance] = None,
    feasible_only: bool = True,
    extensions: bool = True,
) -> List[float]:
    """Global positions on ``curve`` of its vertices and of its event points.

    Event points are the crossings of the eps-circles around ``centres`` with
    the curve's edges and, with ``extensions``, the shortcut-extension
    crossings. Extension crossings are kept only when the shortcut to them is
    within eps of the curve (``feasible_only``). Arc-length positions of events
    are rounded to multiples of delta; events closer than delta/2 to a vertex
    are dropped.
    """
    tol = tol or Tolerance.default()
    vertices = curve.vertices
    arcs: List[float] = []
    for centre in centres:
        lo, hi = ball_edges_intersection(centre, eps, vertices[:-1], vertices[1:], tol)
        for edge in np.flatnonzero(~np.isnan(lo)):
            arcs.extend(curve.arc_position(edge + t) for t in (lo[edge], hi[edge]))
    for a, _, first_x, second_x in _extension_hits(curve, tol) if extensions else ():
        for x in (first_x, second_x):
            if x is None:
                continue
            if feasible_only:
                points = np.vstack([vertices[a : int(math.floor(x)) + 1], curve.point_at(x)])
                if not segment_frechet_decision(curve[a], curve.point_at(x), points, eps, tol):
                    continue
            arcs.append(curve.arc_position(x))
    vertex_arcs = [curve.arc_length(i) for i in range(len(curve))]
    merge_radius = max(tol.abs_tol, (delta or 0.0) / 2)
    events = unique_sorted(
        (min(max(quantize(s, delta), 0.0), curve.length) for s in arcs), max(tol.abs_tol, 1e-12)
    )
    kept = [
        s for s in events if min(abs(s - v) for v in vertex_arcs) > merge_radius
    ]
    positions = sorted([float(i) for i in range(len(curve))] + [curve.position_of_arc(s) for s in kept])
    logger.debug("%d event positions on a %d-vertex curve", len(positions), len(curve))
    return positions


def candidate_points(
    P: Polyline,
    Q: Polyline,
    eps: float,
    mode: VertexMode,
    delta: Optional[float] = None,
    tol: Optional[Tolerance] = None,
) -> Tuple[np.ndarray, bool]:
    """Plane points allowed as vertices, and whether they are ordered along P.

    Ordered candidates are points of P sorted along it; a path may then only
    move forward in candidate order. Against another curve the candidates are
    the endpoints of the shortcut candidates, plus in plane mode the
    eps-circle crossings of both curves.
    """
    tol = tol or Tolerance.default()
    same = Q == P
    if mode == VertexMode.ONE_CURVE_VERTICES or (mode == VertexMode.INPUT_VERTICES and same):
        return P.vertices.copy(), True
    if same:
        positions = curve_event_positions(P, eps, list(P), delta, tol)
        return np.array([P.point_at(x) for x in positions]), True
    endpoints = dict.fromkeys(point for segment in shortcut_candidates(P, Q, mode, tol) for point in segment)
    points = list(endpoints)
    if mode == VertexMode.ANY_PLANE_POINT:
        centres = list(P) + list(Q)
        for curve in (P, Q):
            positions = curve_event_positions(curve, eps, centres, delta, tol, feasible_only=False, extensions=False)
            points.extend(curve.point_at(x) for x in positions)
    return _unique_points(np.array(points, dtype=float), tol), False


def _unique_points(points: np.ndarray, tol: Tolerance) -> np.ndarray:
    kept: List[np.ndarray] = []
    for point in points:
        if all(math.dist(point, other) > tol.abs_tol for other in kept):
            kept.append(point)
    return np.array(kept)


class _ReferenceSweep:
    """Distance-ordered exploration of the event graph of a set of references"""

    def __init__(
        self,
        references: Sequence[Reference],
        candidates: np.ndarray,
        ordered: bool,
        sources: Optional[Sequence[int]],
        sinks: Optional[Sequence[int]],
        tol: Tolerance,
    ):
        self.references = list(references)
        self.candidates = np.asarray(candidates, dtype=float)
        self.points = [Point(float(x), float(y)) for x, y in self.candidates]
        self.ordered = ordered
        self.tol = tol
        self.slack = tol.abs_tol
        count = len(self.candidates)
        self.source_ids = list(range(count)) if sources is None else list(sources)
        self.sink_ids = set(range(count)) if sinks is None else set(sinks)
        self.free: List[List[List[Optional[Tuple[float, float]]]]] = []
        self.components: List[List[List[Optional[int]]]] = []
        for curve, eps in self.references:
            vertices = curve.vertices
            per_candidate, per_components = [], []
            for point in self.candidates:
                lo, hi = ball_edges_intersection(point, eps, vertices[:-1], vertices[1:], tol)
                intervals = [None if math.isnan(a) else (a, b) for a, b in zip(lo.tolist(), hi.tolist())]
                per_candidate.append(intervals)
                per_components.append(self._label_components(intervals))
            self.free.append(per_candidate)
            self.components.append(per_components)
        self.graph = EventGraph(candidate_count=count)
        self._index: Dict[tuple, int] = {}

    def _label_components(self, intervals) -> List[Optional[int]]:
        labels: List[Optional[int]] = []
        label, joined = -1, False
        for interval in intervals:
            if interval is None:
                labels.append(None)
                joined = False
                continue
            if not (joined and interval[0] <= self.slack):
                label += 1
            labels.append(label)
            joined = interval[1] >= 1 - self.slack
        return labels

    def _end_component(self, r: int, c: int) -> Optional[int]:
        last = self.free[r][c][-1]
        if last is None or last[1] < 1 - self.slack:
            return None
        return self.components[r][c][-1]

    def is_final(self, node: EventNode, comps: Tuple[int, ...]) -> bool:
        if node.kind == NodeKind.SOURCE or node.candidate not in self.sink_ids:
            return False
        return all(self._end_component(r, node.candidate) == comps[r] for r in range(len(self.references)))

    def strip_arrivals(self, r: int, x: float, c: int, target: int) -> Dict[int, float]:
        """Lowest arrival per free component of ``target`` when the segment c -> target
        starts matched at position x of reference r"""
        curve, eps = self.references[r]
        m = len(curve)
        # a position on a vertex is started from the end of the edge before it
        first = min(max(int(math.ceil(x)) - 1, 0), m - 2)
        frac = x - first
        start_free, end_free = self.free[r][c], self.free[r][target]
        segment = Segment(self.points[c], self.points[target])
        vertex_lo, vertex_hi = balls_segment_intersection(curve.vertices[first + 1 :], eps, segment, self.tol)
        slack = self.slack
        interval = start_free[first]
        bottom = (frac, interval[1]) if interval is not None and interval[1] >= frac - slack else None
        left = None
        arrivals: Dict[int, float] = {}
        for edge in range(first, m - 1):
            if edge > first:
                interval = start_free[edge]
                if bottom is not None and bottom[1] >= 1 - slack and interval is not None and interval[0] <= slack:
                    bottom = (0.0, interval[1])
                else:
                    bottom = None
            if left is None and bottom is None:
                break
            k = edge - first
            right_free = None if math.isnan(vertex_lo[k]) else (float(vertex_lo[k]), float(vertex_hi[k]))
            right, top = propagate_cell(left, bottom, right_free, end_free[edge], slack)
            if top is not None:
                label = self.components[r][target][edge]
                if label not in arrivals:
                    arrivals[label] = edge + top[0]
            left = right
        return arrivals

    def _node(self, c: int, positions, comps, direction, kind=NodeKind.EVENT) -> Tuple[int, bool]:
        key = (c, positions, comps, direction, kind)
        if key in self._index:
            return self._index[key], False
        node = EventNode(
            candidate=c, plane_point=self.points[c], positions=positions, dir_class=direction, kind=kind
        )
        self.graph.nodes.append(node)
        self._index[key] = len(self.graph.nodes) - 1
        return self._index[key], True

    def _dominated(self, entries, positions, dist, direction) -> bool:
        for seen_positions, seen_dist, seen_direction in entries:
            if any(a > b + self.slack for a, b in zip(seen_positions, positions)):
                continue
            if seen_dist + 1 <= dist:
                return True
            if seen_direction == direction or same_direction(seen_direction, direction, self.tol):
                return True
        return False

    def run(self) -> EventGraph:
        R = len(self.references)
        dist: Dict[int, int] = {}
        comps_of: Dict[int, Tuple[int, ...]] = {}
        queue: deque = deque()
        for c in self.source_ids:
            firsts = [self.free[r][c][0] for r in range(R)]
            if any(f is None or f[0] > self.slack for f in firsts):
                continue
            comps = tuple(self.components[r][c][0] for r in range(R))
            u, _ = self._node(c, tuple(0.0 for _ in range(R)), comps, None, NodeKind.SOURCE)
            self.graph.sources.append(u)
            dist[u], comps_of[u] = 0, comps
            queue.append(u)
        if not self.graph.sources:
            raise EmptyGraphException("empty graph: no candidate is free at every start")
        popped: Dict[tuple, list] = defaultdict(list)
        expanded = set()
        count = len(self.candidates)
        while queue:
            u = queue.popleft()
            if u in expanded:
                continue
            expanded.add(u)
            node, d, comps = self.graph.nodes[u], dist[u], comps_of[u]
            if self.is_final(node, comps):
                self.graph.nodes[u] = node.copy(update={"kind": NodeKind.SINK})
                self.graph.sinks.append(u)
                break
            key = (node.candidate, comps)
            if self._dominated(popped[key], node.positions, d, node.dir_class):
                continue
            popped[key].append((node.positions, d, node.dir_class))
            c = node.candidate
            for target in range(c + 1 if self.ordered else 0, count):
                if target == c:
                    continue
                direction = unit_direction(self.points[c], self.points[target])
                if direction is None:
                    continue
                per_reference = []
                for r in range(R):
                    arrivals = self.strip_arrivals(r, node.positions[r], c, target)
                    if not arrivals:
                        break
                    per_reference.append(sorted(arrivals.items()))
                else:
                    weight = 0 if same_direction(node.dir_class, direction, self.tol) else 1
                    for combo in itertools.product(*per_reference):
                        positions = tuple(position for _, position in combo)
                        if not self.ordered and (positions, target) <= (node.positions, c):
                            continue
                        target_comps = tuple(label for label, _ in combo)
                        v, _ = self._node(target, positions, target_comps, direction)
                        comps_of[v] = target_comps
                        self.graph.edges.append(EventEdge(source=u, target=v, weight=weight))
                        if d + weight < dist.get(v, math.inf):
                            dist[v] = d + weight
                            if weight == 0:
                                queue.appendleft(v)
                            else:
                                queue.append(v)
        logger.debug(
            "event graph: %d nodes, %d edges, %d candidates",
            len(self.graph.nodes),
            len(self.graph.edges),
            count,
        )
        return self.graph


def build_reference_graph(
    references: Sequence[Reference],
    candidates: np.ndarray,
    ordered: bool = False,
    sources: Optional[Sequence[int]] = None,
    sinks: Optional[Sequence[int]] = None,
    tol: Optional[Tolerance] = None,
) -> EventGraph:
    """Event graph for curves within eps_i of every reference curve P_i.

    Args:
        references (Sequence[Reference]): (curve, eps) pairs
        candidates (np.ndarray): allowed vertex positions, shape (C, 2)
        ordered (bool): candidates are sorted along a curve and must be used in order
        sources (Optional[Sequence[int]]): candidates allowed as first vertex, all when None
        sinks (Optional[Sequence[int]]): candidates allowed as last vertex, all when None
        tol (Optional[Tolerance]): comparison tolerance

    Raises:
        EmptyGraphException: when no allowed source is free at every start

    Returns:
        EventGraph: the nodes and edges discovered up to the first sink
    """
    tol = tol or Tolerance.default()
    return _ReferenceSweep(references, candidates, ordered, sources, sinks, tol).run()


def build_event_graph(
    P: Polyline,
    Q: Polyline,
    eps: float,
    mode: VertexMode = VertexMode.INPUT_VERTICES,
    tol: Optional[Tolerance] = None,
    delta: Optional[float] = None,
) -> EventGraph:
    """Event graph of curves from P's start to P's end within eps of Q"""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    tol = tol or Tolerance.default()
    if math.dist(P.start, Q.start) > eps + tol.abs_tol or math.dist(P.end, Q.end) > eps + tol.abs_tol:
        raise EmptyGraphException()
    candidates, ordered = candidate_points(P, Q, eps, mode, delta, tol)
    if ordered:
        source, sink = 0, len(candidates) - 1
    else:
        source = _closest(candidates, P.start)
        sink = _closest(candidates, P.end)
    return build_reference_graph([(Q, eps)], candidates, ordered, [source], [sink], tol)


def _closest(candidates: np.ndarray, point: Sequence[float]) -> int:
    return int(np.argmin(np.hypot(*(candidates - np.asarray(point, dtype=float)).T)))


def _shortest_path(graph: EventGraph) -> Tuple[List[int], int]:
    if not graph.sources:
        raise EmptyGraphException()
    adjacency = graph.adjacency()
    dist = {u: 0 for u in graph.sources}
    parent: Dict[int, Optional[int]] = {u: None for u in graph.sources}
    queue = deque(graph.sources)
    done = set()
    while queue:
        u = queue.popleft()
        if u in done:
            continue
        done.add(u)
        for edge in adjacency[u]:
            candidate = dist[u] + edge.weight
            if candidate < dist.get(edge.target, math.inf):
                dist[edge.target] = candidate
                parent[edge.target] = u
                if edge.weight == 0:
                    queue.appendleft(edge.target)
                else:
                    queue.append(edge.target)
    reached = [s for s in graph.sinks if s in dist]
    if not reached:
        raise UnreachableException()
    sink = min(reached, key=lambda s: (dist[s], s))
    path = [sink]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1], dist[sink]


def min_link_path(graph: EventGraph) -> List[EventNode]:
    """Cheapest source-to-sink node sequence (0/1 weights, deque relaxation).

    Ties keep the first parent found, so the result is deterministic.

    Raises:
        EmptyGraphException: when the graph has no source
        UnreachableException: when no sink can be reached
    """
    path, _ = _shortest_path(graph)
    return [graph.nodes[u] for u in path]


def path_curve(nodes: Sequence[EventNode], tol: Optional[Tolerance] = None) -> Polyline:
    """Plane curve of a node path; continuing edges replace the last vertex"""
    tol = tol or Tolerance.default()
    points = [nodes[0].plane_point]
    for before, after in zip(nodes, nodes[1:]):
        if same_direction(before.dir_class, after.dir_class, tol):
            points[-1] = after.plane_point
        else:
            points.append(after.plane_point)
    return Polyline(points, tol)


def _result(
    curve: Polyline,
    original: Polyline,
    target_eps: Optional[float],
    mode: VertexMode,
    algorithm: SimplificationAlgorithm,
    tol: Tolerance,
    event_count: int = 0,
) -> SimplificationResult:
    return SimplificationResult(
        curve=curve,
        achieved_eps=frechet_distance(curve, original, tol),
        target_eps=target_eps,
        mode=mode,
        algorithm=algorithm,
        event_count=event_count,
    )


def min_k_simplify(
    P: Polyline,
    eps: float,
    mode: VertexMode = VertexMode.INPUT_VERTICES,
    delta: Optional[float] = None,
    tol: Optional[Tolerance] = None,
) -> SimplificationResult:
    """Fewest-link curve with P's endpoints within Fréchet distance eps of P

    Args:
        P (Polyline): curve to simplify
        eps (float): error, >= 0
        mode (VertexMode): where vertices may lie
        delta (Optional[float]): rounding step of event positions (plane mode)
        tol (Optional[Tolerance]): comparison tolerance

    Returns:
        SimplificationResult: the simplification with its measured error
    """
    tol = tol or Tolerance.default()
    graph = build_event_graph(P, P, eps, mode, tol, delta)
    nodes = min_link_path(graph)
    curve = path_curve(nodes, tol)
    logger.debug("min-k at eps=%r: %d links, %d events", eps, len(curve) - 1, graph.event_count)
    return _result(curve, P, eps, mode, SimplificationAlgorithm.MIN_K, tol, graph.event_count)


def _vertex_shortcut_distances(vertices: np.ndarray) -> np.ndarray:
    """Distances from every vertex to every shortcut skipping at least one vertex"""
    first, second = np.triu_indices(len(vertices), k=2)
    if len(first) == 0:
        return np.empty(0)
    starts = vertices[first]
    d = vertices[second] - starts
    length_sq = np.einsum("ij,ij->i", d, d)
    safe = np.where(length_sq > 0, length_sq, 1.0)
    values = []
    for point in vertices:
        t = np.clip(np.einsum("ij,ij->i", point - starts, d) / safe, 0.0, 1.0)
        values.append(np.hypot(*(starts + t[:, None] * d - point).T))
    return np.concatenate(values)


def eps_candidates(P: Polyline, delta: Optional[float]) -> List[float]:
    """0 and every vertex-vertex, vertex-edge and vertex-shortcut distance of P, rounded up to delta"""
    vertices = P.vertices
    diffs = vertices[:, None, :] - vertices[None, :, :]
    values = np.concatenate(
        [
            [0.0],
            np.hypot(diffs[..., 0], diffs[..., 1]).ravel(),
            vertex_edge_distances(vertices, vertices).ravel(),
            _vertex_shortcut_distances(vertices),
        ]
    )
    return unique_sorted((quantize_up(v, delta) for v in values), 1e-12)


def _refine_min_eps(
    attempt: Callable[[float], SimplificationResult],
    k: int,
    low: float,
    high: float,
    best: SimplificationResult,
    delta: Optional[float],
    tol: Tolerance,
) -> SimplificationResult:
    """Smallest error in (low, high] within k links: on the delta lattice, else to the tolerance.

    Equal-distance events and plane-point events fall between the candidates.
    """
    if delta:
        lo_step, hi_step = math.floor(low / delta + 1e-9) + 1, int(round(high / delta))
        while lo_step < hi_step:
            mid = (lo_step + hi_step) // 2
            trial = attempt(mid * delta)
            if trial.links <= k:
                hi_step, best = mid, trial
            else:
                lo_step = mid + 1
        return best
    iterations = 0
    while high - low > max(tol.abs_tol, tol.rel_tol * high) and iterations < settings_lib.bisection_max_iter:
        mid = (low + high) / 2
        trial = attempt(mid)
        if trial.links <= k:
            high, best = mid, trial
        else:
            low = mid
        iterations += 1
    return best


def min_eps_simplify(
    P: Polyline,
    k: int,
    delta: Optional[float] = None,
    mode: VertexMode = VertexMode.INPUT_VERTICES,
    tol: Optional[Tolerance] = None,
) -> SimplificationResult:
    """Smallest error whose min-k simplification has at most k links.

    A binary search over the candidate errors brackets the answer, which is
    then narrowed inside the bracket by the same decision.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tol = tol or Tolerance.default()

    def attempt(eps: float) -> SimplificationResult:
        return min_k_simplify(P, eps, mode, delta, tol)

    values = eps_candidates(P, delta)
    lo, hi = 0, len(values) - 1
    best = attempt(values[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        trial = attempt(values[mid])
        if trial.links <= k:
            hi, best = mid, trial
        else:
            lo = mid + 1
    if best.target_eps != values[lo]:
        best = attempt(values[lo])
    if lo > 0:
        best = _refine_min_eps(attempt, k, values[lo - 1], values[lo], best, delta, tol)
    logger.debug("min-eps for k=%d: eps=%r over %d candidates", k, best.target_eps, len(values))
    return best.copy(update={"algorithm": SimplificationAlgorithm.MIN_EPS})


def _subcurve_points(curve: Polyline, x0: float, x1: float) -> np.ndarray:
    inner = curve.vertices[int(math.floor(x0)) + 1 : int(math.ceil(x1))]
    return np.vstack([curve.point_at(x0), inner, curve.point_at(x1)])


def bicriteria_simplify(
    P: Polyline,
    Q: Optional[Polyline] = None,
    eps: float = 0.0,
    tol: Optional[Tolerance] = None,
    delta: Optional[float] = None,
) -> SimplificationResult:
    """Simplification of P within eps, on P's vertices and event points.

    Vertices are P's vertices and event points of P (eps-circle crossings
    around the vertices of P and Q, shortcut-extension crossings), in order
    along P. A shortcut is accepted when it is within eps of the sub-curve it
    replaces; a link continuing the previous direction costs nothing. Run at
    2 eps the result has at most twice the links of the optimum at eps.

    Raises:
        SimplificationFailedException: when the last vertex is unreachable
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    tol = tol or Tolerance.default()
    Q = P if Q is None else Q
    centres = list(P) if Q == P else list(P) + list(Q)
    positions = curve_event_positions(P, eps, centres, delta, tol)
    points = [P.point_at(x) for x in positions]
    size = len(positions)
    cost = [math.inf] * size
    parent = [-1] * size
    cost[0] = 0
    for j in range(1, size):
        for k in range(j):
            if cost[k] == math.inf:
                continue
            step = 0 if parent[k] >= 0 and collinear_continuation(points[parent[k]], points[k], points[j], tol) else 1
            if cost[k] + step >= cost[j]:
                continue
            if segment_frechet_decision(points[k], points[j], _subcurve_points(P, positions[k], positions[j]), eps, tol):
                cost[j], parent[j] = cost[k] + step, k
    if cost[-1] == math.inf:
        raise SimplificationFailedException()
    chain = [size - 1]
    while parent[chain[-1]] >= 0:
        chain.append(parent[chain[-1]])
    chain.reverse()
    kept = [points[chain[0]]]
    for before, here, after in zip(chain, chain[1:], chain[2:]):
        if not collinear_continuation(points[before], points[here], points[after], tol):
            kept.append(points[here])
    kept.append(points[chain[-1]])
    curve = Polyline(kept, tol)
    logger.debug("bicriteria: %d links over %d vertices", len(curve) - 1, size)
    return _result(curve, P, eps, VertexMode.ANY_PLANE_POINT, SimplificationAlgorithm.BICRITERIA, tol, size)


def greedy_disk_simplify(P: Polyline, eps: float, tol: Optional[Tolerance] = None) -> SimplificationResult:
    """Jumps from each anchor to the farthest vertex whose shortcut is within eps"""
    tol = tol or Tolerance.default()
    vertices = P.vertices
    chain = [0]
    while chain[-1] < len(P) - 1:
        anchor = chain[-1]
        reach = anchor + 1
        for j in range(anchor + 2, len(P)):
            if segment_frechet_decision(vertices[anchor], vertices[j], vertices[anchor : j + 1], eps, tol):
                reach = j
        chain.append(reach)
    curve = Polyline(vertices[chain], tol)
    return _result(curve, P, eps, VertexMode.INPUT_VERTICES, SimplificationAlgorithm.GREEDY, tol)


def imai_iri_simplify(P: Polyline, eps: float, tol: Optional[Tolerance] = None) -> SimplificationResult:
    """Breadth-first shortest path in the graph of feasible vertex shortcuts"""
    tol = tol or Tolerance.default()
    vertices = P.vertices
    n = len(P)
    parent = [-1] * n
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue and not seen[n - 1]:
        i = queue.popleft()
        for j in range(i + 1, n):
            if seen[j]:
                continue
            if segment_frechet_decision(vertices[i], vertices[j], vertices[i : j + 1], eps, tol):
                seen[j], parent[j] = True, i
                queue.append(j)
    chain = [n - 1]
    while parent[chain[-1]] >= 0:
        chain.append(parent[chain[-1]])
    curve = Polyline(vertices[chain[::-1]], tol)
    return _result(curve, P, eps, VertexMode.INPUT_VERTICES, SimplificationAlgorithm.IMAI_IRI, tol)
