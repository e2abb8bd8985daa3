"""Representative curves minimising the L_p norm of Fréchet distances"""

import itertools
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from .exceptions import BasePolymeanException, InstanceTooLargeException, UnreachableException
from .fields import PExponent
from .frechet import frechet_distance, frechet_matching, vertex_edge_distances
from .geom import Point, Polyline, Tolerance
from .models import ChunkOperation, PMeanAlgorithm, PMeanResult, VertexMode
from .simplify import (
    _shortest_path,
    bicriteria_simplify,
    build_reference_graph,
    imai_iri_simplify,
    min_eps_simplify,
    min_k_simplify,
    path_curve,
)
from .utils import get_rng, quantize_up, settings_lib, unique_sorted

logger = logging.getLogger(__name__)

__all__ = [
    "lp_center",
    "enclosing_circle",
    "lp_norm_frechet",
    "two_curve_pmean",
    "pairwise_pmean",
    "simplify_then_pmean",
    "exact_pmean_small",
    "chunk_bounds",
    "chunked_pmean",
]

Circle = Tuple[float, float, float]


def _circle_two(a, b) -> Circle:
    cx, cy = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    return cx, cy, max(math.dist((cx, cy), a), math.dist((cx, cy), b))


def _circumcircle(a, b, c) -> Optional[Circle]:
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2
    if d == 0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    return x, y, max(math.dist((x, y), p) for p in (a, b, c))


def _inside(circle: Optional[Circle], p, slack: float) -> bool:
    return circle is not None and math.dist(circle[:2], p) <= circle[2] + slack


def _cross(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _circle_with_two(points, p, q, slack: float) -> Circle:
    base = _circle_two(p, q)
    left = right = None
    for r in points:
        if _inside(base, r, slack):
            continue
        circle = _circumcircle(p, q, r)
        if circle is None:
            continue
        cross = _cross(p, q, r)
        if cross > 0 and (left is None or _cross(p, q, circle) > _cross(p, q, left)):
            left = circle
        elif cross < 0 and (right is None or _cross(p, q, circle) < _cross(p, q, right)):
            right = circle
    if left is None and right is None:
        return base
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def enclosing_circle(points: Sequence[Sequence[float]], seed: Optional[int] = None, slack: float = 1e-12) -> Circle:
    """Smallest enclosing circle (x, y, r) by randomised incremental construction"""
    shuffled = [(float(x), float(y)) for x, y in points]
    get_rng(seed).shuffle(shuffled)
    circle: Optional[Circle] = None
    for i, p in enumerate(shuffled):
        if _inside(circle, p, slack):
            continue
        circle = (p[0], p[1], 0.0)
        for j, q in enumerate(shuffled[:i]):
            if _inside(circle, q, slack):
                continue
            circle = _circle_with_two(shuffled[:j], p, q, slack)
    return circle


def _weiszfeld(points: np.ndarray, tol: Tolerance) -> np.ndarray:
    y = points.mean(axis=0)
    for _ in range(settings_lib.median_max_iter):
        d = np.hypot(*(points - y).T)
        coincide = d <= tol.abs_tol
        weights = 1.0 / d[~coincide]
        others = points[~coincide]
        if len(others) == 0:
            return y
        target = (weights[:, None] * others).sum(axis=0) / weights.sum()
        if coincide.any():
            # damped step off an input point (Vardi and Zhang)
            pull = np.hypot(*(weights[:, None] * (others - y)).sum(axis=0))
            share = min(1.0, coincide.sum() / pull) if pull > 0 else 1.0
            nxt = (1 - share) * target + share * y
        else:
            nxt = target
        if math.dist(nxt, y) <= tol.abs_tol:
            return nxt
        y = nxt
    logger.warning("geometric median stopped at the iteration cap")
    return y


def lp_center(points: Sequence[Sequence[float]], p: PExponent = PExponent(2), tol: Optional[Tolerance] = None) -> Point:
    """Point minimising the L_p norm of its distances to ``points``

    Args:
        points (Sequence[Sequence[float]]): at least one point
        p (PExponent): exponent, infinity gives the enclosing-circle centre
        tol (Optional[Tolerance]): convergence tolerance of the iterative cases

    Returns:
        Point: the centre
    """
    tol = tol or Tolerance.default()
    p = PExponent(p)
    array = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(array) == 0:
        raise ValueError("lp_center needs at least one point")
    if len(array) == 1:
        return Point(*map(float, array[0]))
    if len(array) == 2:
        return Point(*map(float, array.mean(axis=0)))
    if p.is_infinite:
        x, y, _ = enclosing_circle(array)
        return Point(x, y)
    if p == 2:
        return Point(*map(float, array.mean(axis=0)))
    if p == 1:
        return Point(*map(float, _weiszfeld(array, tol)))
    exponent = float(p)

    def objective(y):
        d = np.hypot(*(array - y).T)
        return float(np.sum(d**exponent))

    def gradient(y):
        diff = y - array
        d = np.hypot(*diff.T)
        return (exponent * d[:, None] ** (exponent - 2) * diff).sum(axis=0)

    found = minimize(objective, array.mean(axis=0), jac=gradient, method="BFGS", options={"gtol": tol.abs_tol})
    return Point(*map(float, found.x))


def lp_norm_frechet(
    M: Polyline, curves: Sequence[Polyline], p: PExponent = PExponent(2), tol: Optional[Tolerance] = None
) -> float:
    if not curves:
        raise ValueError("curves must not be empty")
    return PExponent(p).norm([frechet_distance(M, curve, tol) for curve in curves])


def _result(curve: Polyline, curves: Sequence[Polyline], p: PExponent, algorithm: PMeanAlgorithm, tol, **extra) -> PMeanResult:
    distances = [frechet_distance(curve, original, tol) for original in curves]
    return PMeanResult(curve=curve, per_curve_distance=distances, p=PExponent(p), algorithm=algorithm, **extra)


def _midpoint_curve(P: Polyline, Q: Polyline, tol: Tolerance) -> Tuple[Polyline, float]:
    eps = frechet_distance(P, Q, tol)
    matching = frechet_matching(P, Q, eps + tol.abs_tol, tol)
    points = [((pair.p.x + pair.q.x) / 2, (pair.p.y + pair.q.y) / 2) for pair in matching.pairs]
    return Polyline(points, tol), eps


def two_curve_pmean(
    P: Polyline, Q: Polyline, p: PExponent = PExponent(2), tol: Optional[Tolerance] = None
) -> PMeanResult:
    """Midpoint curve of the Fréchet matching, optimal for two curves"""
    tol = tol or Tolerance.default()
    curve, eps = _midpoint_curve(P, Q, tol)
    logger.debug("two-curve mean at d_F=%r with %d vertices", eps, len(curve))
    return _result(curve, [P, Q], p, PMeanAlgorithm.TWO_CURVE_EXACT, tol)


def _distance_matrix(curves: Sequence[Polyline], tol: Tolerance) -> np.ndarray:
    size = len(curves)
    matrix = np.zeros((size, size))
    for i, j in itertools.combinations(range(size), 2):
        matrix[i, j] = matrix[j, i] = frechet_distance(curves[i], curves[j], tol)
    return matrix


def pairwise_pmean(
    curves: Sequence[Polyline],
    p: PExponent = PExponent(2),
    eps: Optional[float] = None,
    k: Optional[int] = None,
    delta: Optional[float] = None,
    mode: VertexMode = VertexMode.INPUT_VERTICES,
    tol: Optional[Tolerance] = None,
) -> PMeanResult:
    """Input curve with the smallest L_p row of the distance matrix, then simplified.

    With a link budget k the chosen curve gets its min-eps simplification,
    otherwise with eps its min-k simplification, otherwise it is kept as is.
    Ties go to the lowest index.
    """
    if len(curves) < 2:
        raise ValueError("pairwise_pmean needs at least 2 curves")
    tol = tol or Tolerance.default()
    p = PExponent(p)
    matrix = _distance_matrix(curves, tol)
    scores = [p.norm(row) for row in matrix]
    selected = int(np.argmin(scores))
    curve = curves[selected]
    if k is not None:
        curve = min_eps_simplify(curve, k, delta, mode, tol).curve
    elif eps is not None:
        curve = min_k_simplify(curve, eps, mode, delta, tol).curve
    logger.debug("pairwise mean selected curve %d with score %r", selected, scores[selected])
    return _result(curve, curves, p, PMeanAlgorithm.PAIRWISE, tol, selected_index=selected)


def simplify_then_pmean(
    curves: Sequence[Polyline],
    p: PExponent = PExponent(2),
    k: int = 1,
    delta: Optional[float] = None,
    simplifier: Optional[Callable[[Polyline], Polyline]] = None,
    tol: Optional[Tolerance] = None,
) -> PMeanResult:
    """Simplify every curve to k links, then take the mean of the simplified curves.

    ``simplifier`` replaces the default min-eps simplification over input vertices.
    """
    if len(curves) < 2:
        raise ValueError("simplify_then_pmean needs at least 2 curves")
    if k < 1:
        raise ValueError("k must be >= 1")
    tol = tol or Tolerance.default()
    if simplifier is None:
        simplified = [min_eps_simplify(curve, k, delta, VertexMode.INPUT_VERTICES, tol).curve for curve in curves]
    else:
        simplified = [simplifier(curve) for curve in curves]
    if len(curves) == 2:
        inner = two_curve_pmean(simplified[0], simplified[1], p, tol)
    else:
        inner = pairwise_pmean(simplified, p, tol=tol)
    return _result(inner.curve, curves, p, PMeanAlgorithm.SIMPLIFY_THEN_MEAN, tol, selected_index=inner.selected_index)


def _exact_candidates(curves: Sequence[Polyline], p: PExponent, tol: Tolerance) -> np.ndarray:
    """Input vertices, midpoints of pairwise matchings, centres of matched tuples"""
    points: List[Sequence[float]] = [v for curve in curves for v in curve]
    for P, Q in itertools.combinations(curves, 2):
        points.extend(_midpoint_curve(P, Q, tol)[0])
    base = curves[0]
    matchings = []
    for other in curves[1:]:
        matching = frechet_matching(base, other, frechet_distance(base, other, tol) + tol.abs_tol, tol)
        matchings.append((np.array(matching.s_values), np.array(matching.t_values), other))
    arcs = unique_sorted(np.concatenate([m[0] for m in matchings]), tol.abs_tol)
    for s in arcs:
        group = [base.point_at(base.position_of_arc(s))]
        for s_values, t_values, other in matchings:
            t = float(np.interp(s, s_values, t_values))
            group.append(other.point_at(other.position_of_arc(t)))
        points.append(lp_center(group, p, tol))
    kept: List[Tuple[float, float]] = []
    for point in points:
        point = (float(point[0]), float(point[1]))
        if all(math.dist(point, other) > tol.abs_tol for other in kept):
            kept.append(point)
    return np.array(kept)


def _segment_vertex_distances(candidates: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Distances from each vertex to each segment between two candidates"""
    first, second = np.triu_indices(len(candidates), k=1)
    if len(first) == 0:
        return np.empty(0)
    starts = candidates[first]
    d = candidates[second] - starts
    length_sq = np.einsum("ij,ij->i", d, d)
    safe = np.where(length_sq > 0, length_sq, 1.0)
    values = []
    for point in vertices:
        t = np.clip(np.einsum("ij,ij->i", point - starts, d) / safe, 0.0, 1.0)
        values.append(np.hypot(*(starts + t[:, None] * d - point).T))
    return np.concatenate(values)


def _eps_values(candidates: np.ndarray, curve: Polyline, delta: Optional[float], cap: float) -> List[float]:
    values = np.concatenate(
        [
            [0.0],
            np.hypot(*(candidates[:, None, :] - curve.vertices[None, :, :]).transpose(2, 0, 1)).ravel(),
            vertex_edge_distances(candidates, curve.vertices).ravel(),
            _segment_vertex_distances(candidates, curve.vertices),
        ]
    )
    values = [quantize_up(v, delta) for v in values]
    return [v for v in unique_sorted(values, 1e-12) if v <= quantize_up(cap, delta) + 1e-12]


def exact_pmean_small(
    curves: Sequence[Polyline],
    p: PExponent = PExponent(2),
    delta: Optional[float] = None,
    k: Optional[int] = None,
    tol: Optional[Tolerance] = None,
    override: bool = False,
) -> PMeanResult:
    """Best mean curve over per-curve error vectors drawn from candidate distances.

    Error values are candidate-to-curve distances rounded up to delta. With
    p = inf the smallest common error is found by bisection. Otherwise that
    answer bounds a search over the error lists: leading coordinates are
    enumerated while their norm stays below the best found, and the last two
    follow the staircase of smallest feasible pairs, feasibility being
    monotone in every coordinate.

    Raises:
        InstanceTooLargeException: beyond the configured curve or vertex caps
        UnreachableException: when no error vector admits a curve within k links
    """
    tol = tol or Tolerance.default()
    p = PExponent(p)
    if not override and (
        not 2 <= len(curves) <= settings_lib.exact_max_curves
        or any(len(curve) > settings_lib.exact_max_vertices for curve in curves)
    ):
        raise InstanceTooLargeException()
    candidates = _exact_candidates(curves, p, tol)
    caps = [float(np.max(np.hypot(*(candidates[:, None, :] - c.vertices[None, :, :]).transpose(2, 0, 1)))) for c in curves]
    lists = [_eps_values(candidates, curve, delta, cap) for curve, cap in zip(curves, caps)]
    logger.debug("exact search: %d candidates, eps list sizes %s", len(candidates), [len(v) for v in lists])
    seen: Dict[Tuple[float, ...], Optional[list]] = {}

    def feasible(eps_vector: Sequence[float]) -> Optional[list]:
        key = tuple(eps_vector)
        if key not in seen:
            try:
                graph = build_reference_graph(list(zip(curves, eps_vector)), candidates, tol=tol)
                path, weight = _shortest_path(graph)
                seen[key] = None if k is not None and weight > k else [graph.nodes[u] for u in path]
            except BasePolymeanException:
                seen[key] = None
        return seen[key]

    common = unique_sorted(itertools.chain.from_iterable(lists), 1e-12)
    if feasible([common[-1]] * len(curves)) is None:
        raise UnreachableException("no error vector admits a mean curve within the link budget")
    lo, hi = 0, len(common) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible([common[mid]] * len(curves)) is not None:
            hi = mid
        else:
            lo = mid + 1
    best_vector = [common[lo]] * len(curves)
    best = p.norm(best_vector)

    def consider(eps_vector: List[float]) -> None:
        nonlocal best, best_vector
        cost = p.norm(eps_vector)
        if cost < best:
            best, best_vector = cost, eps_vector

    def staircase(prefix: List[float]) -> None:
        a, b = lists[-2], lists[-1]
        j = len(b)
        for value in a:
            if p.norm(prefix + [value, 0.0]) >= best:
                break
            if j == len(b):
                if feasible(prefix + [value, b[-1]]) is None:
                    continue
                low, high = 0, len(b) - 1
                while low < high:
                    mid = (low + high) // 2
                    if feasible(prefix + [value, b[mid]]) is not None:
                        high = mid
                    else:
                        low = mid + 1
                j = low
            else:
                while j > 0 and feasible(prefix + [value, b[j - 1]]) is not None:
                    j -= 1
            consider(prefix + [value, b[j]])

    def enumerate_prefix(prefix: List[float]) -> None:
        if len(prefix) == len(curves) - 2:
            staircase(prefix)
            return
        for value in lists[len(prefix)]:
            if p.norm(prefix + [value] + [0.0] * (len(curves) - len(prefix) - 1)) >= best:
                break
            enumerate_prefix(prefix + [value])

    if not p.is_infinite:
        enumerate_prefix([])
    logger.debug("exact search settled after %d evaluations at %s", len(seen), best_vector)
    curve = path_curve(feasible(best_vector), tol)
    return _result(curve, curves, p, PMeanAlgorithm.EXACT_SMALL, tol, eps_vector=best_vector)


def chunk_bounds(n: int, chunk_size: int) -> List[int]:
    """Vertex indices where consecutive chunks meet, first and last included"""
    if chunk_size < 2:
        raise ValueError("chunk_size must be >= 2")
    return list(range(0, n - 1, chunk_size - 1)) + [n - 1]


def _simplify_chunk(
    chunk: Polyline, operation: ChunkOperation, eps: float, delta: Optional[float], tol: Tolerance
):
    if operation == ChunkOperation.BICRITERIA:
        return bicriteria_simplify(chunk, chunk, eps, tol, delta)
    if operation == ChunkOperation.MIN_K:
        return min_k_simplify(chunk, eps, VertexMode.ANY_PLANE_POINT, delta, tol)
    return imai_iri_simplify(chunk, eps, tol)


def _concatenate(pieces: Sequence[Polyline], tol: Tolerance) -> Polyline:
    points = [pieces[0].vertices]
    for piece in pieces[1:]:
        shared = np.allclose(piece.vertices[0], points[-1][-1], atol=tol.abs_tol)
        points.append(piece.vertices[1:] if shared else piece.vertices)
    return Polyline(np.vstack(points), tol)


def chunked_pmean(
    curves: Sequence[Polyline],
    chunk_size: int = 30,
    eps: Optional[float] = None,
    delta: Optional[float] = None,
    p: PExponent = PExponent(2),
    operation: ChunkOperation = ChunkOperation.BICRITERIA,
    refine: bool = False,
    merge: bool = False,
    k: Optional[int] = None,
    tol: Optional[Tolerance] = None,
) -> PMeanResult:
    """Split, solve per chunk, concatenate; the error bound adds up the chunk errors.

    A single curve is simplified chunk by chunk with ``operation``; several
    curves are cut into the same number of chunks (by global position) and
    each chunk gets its mean curve. ``refine`` simplifies every chunk result
    once more in plane mode, ``merge`` simplifies the concatenation once more.
    """
    tol = tol or Tolerance.default()
    p = PExponent(p)
    curves = list(curves)
    longest = max(len(curve) for curve in curves)
    count = len(chunk_bounds(longest, chunk_size)) - 1
    single = len(curves) == 1
    if single and operation == ChunkOperation.MEAN:
        raise ValueError("the mean operation needs at least 2 curves")
    if not single and operation != ChunkOperation.MEAN:
        raise ValueError(f"{operation.value} takes a single curve")
    if single and eps is None:
        raise ValueError("chunked simplification needs eps")
    pieces: List[Polyline] = []
    bound = 0.0
    for index in range(count):
        if single:
            bounds = chunk_bounds(len(curves[0]), chunk_size)
            chunk = Polyline(curves[0].vertices[bounds[index] : bounds[index + 1] + 1], tol)
            outcome = _simplify_chunk(chunk, operation, eps, delta, tol)
            piece, error = outcome.curve, outcome.achieved_eps
        else:
            parts = []
            for curve in curves:
                cuts = np.linspace(0, len(curve) - 1, count + 1)
                parts.append(curve.subcurve(cuts[index], cuts[index + 1]))
            if len(parts) == 2:
                outcome = two_curve_pmean(parts[0], parts[1], p, tol)
            else:
                outcome = pairwise_pmean(parts, p, eps, k, delta, tol=tol)
            piece, error = outcome.curve, outcome.cost
        if refine and eps is not None:
            refined = min_k_simplify(piece, eps, VertexMode.ANY_PLANE_POINT, delta, tol)
            piece, error = refined.curve, error + refined.achieved_eps
        logger.debug("chunk %d/%d: %d vertices, error %r", index + 1, count, len(piece), error)
        pieces.append(piece)
        bound += error
    curve = _concatenate(pieces, tol)
    if merge and eps is not None:
        if single:
            merged = _simplify_chunk(curve, operation, eps, delta, tol)
        else:
            merged = min_k_simplify(curve, eps, VertexMode.ANY_PLANE_POINT, delta, tol)
        curve, bound = merged.curve, bound + merged.achieved_eps
    return _result(curve, curves, p, PMeanAlgorithm.CHUNKED, tol, error_bound=bound)
