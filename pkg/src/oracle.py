"""Brute-force references for the fast paths. Slow on purpose, small inputs only."""

import itertools
import logging
import math
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import BudgetExceededException, InvalidPolylineException
from .fields import PExponent
from .frechet import decide_frechet, reachable_frontier
from .geom import Polyline, Tolerance, point_polyline_distance
from .models import OracleBudget, VertexMode
from .pmean import lp_center

logger = logging.getLogger(__name__)

__all__ = [
    "OracleBudget",
    "brute_force_discrete_frechet",
    "exact_frechet_by_events",
    "brute_force_min_k",
    "brute_force_min_eps",
    "brute_force_pmean",
    "grid_points",
]


def _couplings(n: int, m: int) -> Iterator[List[Tuple[int, int]]]:
    """Every monotone coupling of index sequences 0..n-1 and 0..m-1"""
    stack = [[(0, 0)]]
    while stack:
        path = stack.pop()
        i, j = path[-1]
        if (i, j) == (n - 1, m - 1):
            yield path
            continue
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            if i + di < n and j + dj < m:
                stack.append(path + [(i + di, j + dj)])


def brute_force_discrete_frechet(P: Polyline, Q: Polyline, budget: Optional[OracleBudget] = None) -> float:
    """Minimum over all couplings of the largest coupled vertex distance

    Raises:
        BudgetExceededException: when |P| * |Q| > 64
    """
    A = P.vertices if isinstance(P, Polyline) else np.atleast_2d(np.asarray(P, dtype=float))
    B = Q.vertices if isinstance(Q, Polyline) else np.atleast_2d(np.asarray(Q, dtype=float))
    if len(A) * len(B) > 64:
        raise BudgetExceededException()
    dist = cdist(A, B)
    best = math.inf
    for coupling in _couplings(len(A), len(B)):
        best = min(best, max(dist[i, j] for i, j in coupling))
    return float(best)


def _frechet_events(P: Polyline, Q: Polyline) -> List[float]:
    """Endpoint, vertex-edge and equal-distance (two vertices, one edge) values"""
    values = [math.dist(P.start, Q.start), math.dist(P.end, Q.end)]
    for A, B in ((P, Q), (Q, P)):
        for vertex in A:
            values.extend(point_polyline_distance(vertex, Polyline([a, b])) for a, b in B.edges())
        for a, b in itertools.combinations(range(len(A)), 2):
            u, v = np.asarray(A[a]), np.asarray(A[b])
            normal = v - u
            middle = (u + v) / 2
            for s0, s1 in B.edges():
                s0, s1 = np.asarray(s0), np.asarray(s1)
                d = s1 - s0
                denom = float(normal @ d)
                if denom == 0:
                    continue
                t = float(normal @ (middle - s0)) / denom
                if 0 <= t <= 1:
                    values.append(float(np.hypot(*(s0 + t * d - u))))
    return sorted(set(values))


def exact_frechet_by_events(P: Polyline, Q: Polyline, tol: Optional[Tolerance] = None) -> float:
    """Smallest critical value accepted by the decision procedure"""
    values = _frechet_events(P, Q)
    lo, hi = 0, len(values) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if decide_frechet(P, Q, values[mid], tol):
            hi = mid
        else:
            lo = mid + 1
    return values[lo]


def grid_points(low: Sequence[float], high: Sequence[float], pitch: float, budget: OracleBudget) -> np.ndarray:
    """Axis-aligned grid over the box [low, high]

    Raises:
        BudgetExceededException: when the grid has more points than the budget allows
    """
    xs = np.arange(low[0], high[0] + pitch / 2, pitch)
    ys = np.arange(low[1], high[1] + pitch / 2, pitch)
    if len(xs) * len(ys) > budget.max_candidates:
        raise BudgetExceededException(f"budget exceeded: {len(xs) * len(ys)} grid points")
    return np.array([(x, y) for x in xs for y in ys])


def _min_k_input_vertices(P: Polyline, eps: float, tol: Optional[Tolerance]) -> int:
    n = len(P)
    for links in range(1, n):
        for inner in itertools.combinations(range(1, n - 1), links - 1):
            if decide_frechet(Polyline(P.vertices[[0, *inner, n - 1]]), P, eps, tol):
                return links
    return n - 1


def brute_force_min_eps(
    P: Polyline, k: int, budget: Optional[OracleBudget] = None, tol: Optional[Tolerance] = None
) -> float:
    """Smallest distance to P of a curve on P's vertices with at most k links, keeping P's endpoints

    Raises:
        BudgetExceededException: for more vertices than allowed
    """
    budget = budget or OracleBudget()
    if len(P) > budget.max_vertices:
        raise BudgetExceededException(f"budget exceeded: {len(P)} vertices")
    n = len(P)
    best = math.inf
    for links in range(1, min(k, n - 1) + 1):
        for inner in itertools.combinations(range(1, n - 1), links - 1):
            subset = Polyline(P.vertices[[0, *inner, n - 1]])
            best = min(best, exact_frechet_by_events(subset, P, tol))
    return float(best)


def brute_force_min_k(
    P: Polyline,
    eps: float,
    mode: VertexMode = VertexMode.INPUT_VERTICES,
    grid: float = 0.05,
    budget: Optional[OracleBudget] = None,
    tol: Optional[Tolerance] = None,
) -> int:
    """Fewest links of a curve with P's endpoints within eps of P.

    InputVertices tries every vertex subset. AnyPlanePoint searches curves
    whose interior vertices lie on a grid (plus P's vertices) over P's bounding
    box inflated by eps, pruning prefixes that cannot be extended.

    Raises:
        BudgetExceededException: for more vertices, grid points or decisions than allowed
    """
    budget = budget or OracleBudget()
    if len(P) > budget.max_vertices:
        raise BudgetExceededException(f"budget exceeded: {len(P)} vertices")
    upper = _min_k_input_vertices(P, eps, tol)
    if mode != VertexMode.ANY_PLANE_POINT or upper == 1:
        return upper
    low, high = P.bounds()
    points = grid_points(np.subtract(low, eps), np.add(high, eps), grid, budget)
    points = np.vstack([points, P.vertices])
    keep = np.array([point_polyline_distance(point, P) <= eps + (tol or Tolerance.default()).abs_tol for point in points])
    points = points[keep]
    checks = 0

    def extend(prefix: List[np.ndarray], remaining: int) -> bool:
        nonlocal checks
        checks += 1
        if checks > budget.max_checks:
            raise BudgetExceededException()
        if remaining == 1:
            return decide_frechet(Polyline(prefix + [P.vertices[-1]], allow_single=False), P, eps, tol)
        for point in points:
            if np.array_equal(point, prefix[-1]):
                continue
            candidate = prefix + [point]
            frontier = reachable_frontier(Polyline(candidate), P, eps, tol)
            if all(interval is None for interval in frontier):
                continue
            if extend(candidate, remaining - 1):
                return True
        return False

    for links in range(1, upper):
        if extend([P.vertices[0]], links):
            logger.debug("plane oracle: %d links after %d checks", links, checks)
            return links
    return upper


def brute_force_pmean(
    curves: Sequence[Polyline],
    p: PExponent = PExponent(2),
    k: int = 1,
    grid: float = 0.05,
    budget: Optional[OracleBudget] = None,
    tol: Optional[Tolerance] = None,
) -> float:
    """Best L_p cost over curves of at most k links on a grid.

    The first and last vertices come from the grid points near the curves'
    start and end points (and their L_p centres); interior vertices from the
    grid over the common bounding box. Partial curves are discarded once the
    distance lower bounds of their vertices reach the best cost.

    Raises:
        BudgetExceededException: for too many curves, vertices or grid points
    """
    budget = budget or OracleBudget()
    p = PExponent(p)
    if len(curves) > budget.max_curves or any(len(curve) > budget.max_vertices for curve in curves):
        raise BudgetExceededException()
    boxes = [curve.bounds() for curve in curves]
    low = np.min([box[0] for box in boxes], axis=0)
    high = np.max([box[1] for box in boxes], axis=0)
    inner = grid_points(low, high, grid, budget)

    def cluster(points: np.ndarray) -> np.ndarray:
        centre = np.asarray(lp_center(points, p, tol))
        c_low = np.minimum(points.min(axis=0), centre) - grid
        c_high = np.maximum(points.max(axis=0), centre) + grid
        near = grid_points(c_low, c_high, grid, budget)
        return np.vstack([near, centre[None, :]])

    starts = cluster(np.array([curve.vertices[0] for curve in curves]))
    ends = cluster(np.array([curve.vertices[-1] for curve in curves]))

    def vertex_bound(point) -> np.ndarray:
        return np.array([point_polyline_distance(point, curve) for curve in curves])

    start_bounds = [
        np.maximum(vertex_bound(s), [math.dist(s, c.vertices[0]) for c in curves]) for s in starts
    ]
    end_bounds = [np.maximum(vertex_bound(e), [math.dist(e, c.vertices[-1]) for c in curves]) for e in ends]
    inner_bounds = [vertex_bound(v) for v in inner]
    best = math.inf
    checks = 0
    order = sorted(range(len(starts)), key=lambda i: p.norm(start_bounds[i]))
    for si in order:
        if p.norm(start_bounds[si]) >= best:
            break
        for middle in itertools.chain.from_iterable(
            itertools.product(range(len(inner)), repeat=r) for r in range(k)
        ):
            bound = start_bounds[si]
            for mi in middle:
                bound = np.maximum(bound, inner_bounds[mi])
            if p.norm(bound) >= best:
                continue
            for ei in range(len(ends)):
                total = np.maximum(bound, end_bounds[ei])
                if p.norm(total) >= best:
                    continue
                checks += 1
                if checks > budget.max_checks:
                    raise BudgetExceededException()
                vertices = [starts[si], *(inner[mi] for mi in middle), ends[ei]]
                try:
                    candidate = Polyline(vertices)
                except InvalidPolylineException:
                    continue
                cost = p.norm([exact_frechet_by_events(candidate, curve, tol) for curve in curves])
                best = min(best, cost)
    logger.debug("pmean oracle: best %r after %d evaluations", best, checks)
    return float(best)
