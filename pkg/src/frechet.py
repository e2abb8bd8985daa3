"""Free-space diagrams, Fréchet decision and value, matchings, discrete Fréchet.

Positions on a polyline with n vertices are global parameters in [0, n-1]:
the integer part is the edge, the fraction is the position on that edge. The
free-space diagram of P (n vertices, x-axis) and Q (m vertices, y-axis) is
stored as two interval arrays:

* ``vertical[i, j]``: free interval on Q's edge j at P's vertex i, shape (n, m-1)
* ``horizontal[i, j]``: free interval on P's edge i at Q's vertex j, shape (n-1, m)

Cell (i, j) has left ``vertical[i, j]``, right ``vertical[i+1, j]``, bottom
``horizontal[i, j]`` and top ``horizontal[i, j+1]``.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import InfeasibleException
from .geom import Interval, Point, Polyline, Segment, Tolerance, ball_edges_intersection, balls_segment_intersection
from .models import FreeSpaceCell, MatchedPair, Matching
from .utils import settings_lib

logger = logging.getLogger(__name__)

__all__ = [
    "FreeSpaceDiagram",
    "build_fsd",
    "propagate_cell",
    "reachable_frontier",
    "decide_frechet",
    "frechet_matching",
    "frechet_distance",
    "discrete_frechet",
    "segment_frechet_decision",
    "vertex_edge_distances",
    "equal_distance_values",
    "critical_values",
]

Reach = Optional[Interval]


class FreeSpaceDiagram:
    """Free space of P and Q at error eps, immutable after construction"""

    __slots__ = ("P", "Q", "eps", "tol", "vertical", "horizontal", "_reach")

    def __init__(self, P: Polyline, Q: Polyline, eps: float, tol: Tolerance, vertical, horizontal):
        self.P, self.Q, self.eps, self.tol = P, Q, eps, tol
        self.vertical: List[List[Reach]] = vertical
        self.horizontal: List[List[Reach]] = horizontal
        self._reach = None

    @property
    def shape(self) -> Tuple[int, int]:
        return self.P.n_edges, self.Q.n_edges

    def cell(self, i: int, j: int) -> FreeSpaceCell:
        return FreeSpaceCell(
            i=i,
            j=j,
            left=self.vertical[i][j],
            right=self.vertical[i + 1][j],
            bottom=self.horizontal[i][j],
            top=self.horizontal[i][j + 1],
        )

    @property
    def cells(self) -> List[List[FreeSpaceCell]]:
        rows, cols = self.shape
        return [[self.cell(i, j) for j in range(cols)] for i in range(rows)]

    @property
    def start_free(self) -> bool:
        return math.dist(self.P.start, self.Q.start) <= self.eps + self.tol.abs_tol

    @property
    def end_free(self) -> bool:
        return math.dist(self.P.end, self.Q.end) <= self.eps + self.tol.abs_tol

    def is_free(self, x: float, y: float) -> bool:
        """Direct distance test of the parameter pair (x on P, y on Q)"""
        return math.dist(self.P.point_at(x), self.Q.point_at(y)) <= self.eps + self.tol.abs_tol

    def reachability(self) -> Tuple[List[List[Reach]], List[List[Reach]]]:
        """Reachable sub-intervals of ``vertical`` and ``horizontal``"""
        if self._reach is None:
            self._reach = _propagate(self)
        return self._reach

    def end_reachable(self) -> bool:
        if not self.end_free:
            return False
        reach_v, reach_h = self.reachability()
        n, m = len(self.P), len(self.Q)
        slack = self.tol.abs_tol
        last_v, last_h = reach_v[n - 1][m - 2], reach_h[n - 2][m - 1]
        return (last_v is not None and last_v[1] >= 1 - slack) or (
            last_h is not None and last_h[1] >= 1 - slack
        )


def _as_intervals(lo: np.ndarray, hi: np.ndarray) -> List[Reach]:
    return [None if math.isnan(a) else (a, b) for a, b in zip(lo.tolist(), hi.tolist())]


def build_fsd(P: Polyline, Q: Polyline, eps: float, tol: Optional[Tolerance] = None) -> FreeSpaceDiagram:
    """Free intervals on every cell boundary of the diagram of P and Q

    Args:
        P (Polyline): curve along the x-axis
        Q (Polyline): curve along the y-axis
        eps (float): error, >= 0
        tol (Optional[Tolerance]): comparison tolerance

    Returns:
        FreeSpaceDiagram: the diagram, reachability computed lazily
    """
    if eps < 0:
        raise ValueError("eps must be >= 0")
    tol = tol or Tolerance.default()
    p_vertices, q_vertices = P.vertices, Q.vertices
    vertical = [
        _as_intervals(*ball_edges_intersection(v, eps, q_vertices[:-1], q_vertices[1:], tol))
        for v in p_vertices
    ]
    by_q_vertex = [
        _as_intervals(*ball_edges_intersection(v, eps, p_vertices[:-1], p_vertices[1:], tol))
        for v in q_vertices
    ]
    horizontal = [list(row) for row in zip(*by_q_vertex)]
    return FreeSpaceDiagram(P, Q, eps, tol, vertical, horizontal)


def propagate_cell(
    left_reach: Reach, bottom_reach: Reach, right_free: Reach, top_free: Reach, slack: float
) -> Tuple[Reach, Reach]:
    """Monotone reachability through one cell.

    Returns:
        Tuple[Reach, Reach]: reachable parts of the right and top boundaries
    """
    right = top = None
    if right_free is not None:
        if bottom_reach is not None:
            right = right_free
        elif left_reach is not None:
            lo = max(left_reach[0], right_free[0])
            if lo <= right_free[1] + slack:
                right = (min(lo, right_free[1]), right_free[1])
    if top_free is not None:
        if left_reach is not None:
            top = top_free
        elif bottom_reach is not None:
            lo = max(bottom_reach[0], top_free[0])
            if lo <= top_free[1] + slack:
                top = (min(lo, top_free[1]), top_free[1])
    return right, top


def _walk_boundary(free: List[Reach], slack: float) -> List[Reach]:
    """Reachable prefix of a boundary line starting at the origin corner"""
    reach: List[Reach] = [None] * len(free)
    for index, interval in enumerate(free):
        if interval is None or interval[0] > slack:
            break
        reach[index] = (0.0, interval[1])
        if interval[1] < 1 - slack:
            break
    return reach


def _propagate(fsd: FreeSpaceDiagram):
    n, m = len(fsd.P), len(fsd.Q)
    slack = fsd.tol.abs_tol
    reach_v: List[List[Reach]] = [[None] * (m - 1) for _ in range(n)]
    reach_h: List[List[Reach]] = [[None] * m for _ in range(n - 1)]
    if not fsd.start_free:
        return reach_v, reach_h
    reach_v[0] = _walk_boundary(fsd.vertical[0], slack)
    for i, interval in enumerate(_walk_boundary([row[0] for row in fsd.horizontal], slack)):
        reach_h[i][0] = interval
    for i in range(n - 1):
        for j in range(m - 1):
            left, bottom = reach_v[i][j], reach_h[i][j]
            if left is None and bottom is None:
                continue
            right, top = propagate_cell(
                left, bottom, fsd.vertical[i + 1][j], fsd.horizontal[i][j + 1], slack
            )
            if right is not None:
                reach_v[i + 1][j] = right
            if top is not None:
                reach_h[i][j + 1] = top
    return reach_v, reach_h


def reachable_frontier(
    P: Polyline, Q: Polyline, eps: float, tol: Optional[Tolerance] = None
) -> List[Reach]:
    """Reachable free intervals on the line of P's last vertex, one per edge of Q"""
    fsd = build_fsd(P, Q, eps, tol)
    reach_v, _ = fsd.reachability()
    return reach_v[len(P) - 1]


def decide_frechet(P: Polyline, Q: Polyline, eps: float, tol: Optional[Tolerance] = None) -> bool:
    """True iff the Fréchet distance of P and Q is at most eps"""
    if eps < 0:
        return False
    return build_fsd(P, Q, eps, tol).end_reachable()


def frechet_matching(P: Polyline, Q: Polyline, eps: float, tol: Optional[Tolerance] = None) -> Matching:
    """Lowermost monotone matching of P and Q at error eps

    Raises:
        InfeasibleException: when the Fréchet distance exceeds eps
    """
    fsd = build_fsd(P, Q, eps, tol)
    if not fsd.end_reachable():
        raise InfeasibleException()
    reach_v, reach_h = fsd.reachability()
    slack = fsd.tol.abs_tol
    n, m = len(P), len(Q)
    x, y = float(n - 1), float(m - 1)
    path = [(x, y)]
    i, j = n - 2, m - 2
    while True:
        s, t = x - i, y - j
        bottom, left = reach_h[i][j], reach_v[i][j]
        if bottom is not None and bottom[0] <= s + slack:
            x, y = i + min(s, bottom[1]), float(j)
            path.append((x, y))
            if j == 0:
                path.extend((float(k), 0.0) for k in range(i, -1, -1))
                break
            j -= 1
        elif left is not None and left[0] <= t + slack:
            x, y = float(i), j + min(t, left[1])
            path.append((x, y))
            if i == 0:
                path.extend((0.0, float(k)) for k in range(j, -1, -1))
                break
            i -= 1
        else:
            raise InfeasibleException("matching backtrack left the reachable free space")
    path.reverse()
    path = [step for index, step in enumerate(path) if index == 0 or step != path[index - 1]]
    pairs = [
        MatchedPair(s=P.arc_position(x), t=Q.arc_position(y), p=P.point_at(x), q=Q.point_at(y))
        for x, y in path
    ]
    return Matching(pairs=pairs)


def vertex_edge_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Distances from every vertex of A to every edge of B, shape (len(A), len(B)-1)"""
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    starts, d = B[:-1], np.diff(B, axis=0)
    length_sq = np.einsum("ij,ij->i", d, d)
    rel = A[:, None, :] - starts[None, :, :]
    safe = np.where(length_sq > 0, length_sq, 1.0)
    t = np.clip(np.einsum("abk,bk->ab", rel, d) / safe, 0.0, 1.0)
    foot = starts[None, :, :] + t[:, :, None] * d[None, :, :]
    return np.hypot(*np.moveaxis(foot - A[:, None, :], -1, 0))


def equal_distance_values(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Distances at which two vertices of A are equally far from one point of an edge of B"""
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    if len(A) < 2 or len(B) < 2:
        return np.empty(0)
    first, second = np.triu_indices(len(A), k=1)
    u, v = A[first], A[second]
    normal = v - u
    middle = (u + v) / 2
    values = []
    for s0, s1 in zip(B[:-1], B[1:]):
        d = s1 - s0
        denom = normal @ d
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.einsum("ij,ij->i", normal, middle - s0) / denom
        hit = (denom != 0) & (t >= 0) & (t <= 1)
        foot = s0 + t[hit, None] * d
        values.append(np.hypot(*(foot - u[hit]).T))
    return np.concatenate(values)


def critical_values(P: Polyline, Q: Polyline) -> np.ndarray:
    """Endpoint, vertex-edge and equal-distance values of P and Q, sorted"""
    values = np.concatenate(
        [
            [math.dist(P.start, Q.start), math.dist(P.end, Q.end)],
            vertex_edge_distances(P.vertices, Q.vertices).ravel(),
            vertex_edge_distances(Q.vertices, P.vertices).ravel(),
            equal_distance_values(P.vertices, Q.vertices),
            equal_distance_values(Q.vertices, P.vertices),
        ]
    )
    return np.unique(values)


def frechet_distance(P: Polyline, Q: Polyline, tol: Optional[Tolerance] = None) -> float:
    """Fréchet distance by bisection, snapped to a critical value when one fits

    Args:
        P (Polyline): first curve
        Q (Polyline): second curve
        tol (Optional[Tolerance]): bisection stops once the bracket is below abs_tol

    Returns:
        float: smallest value found for which the decision procedure succeeds
    """
    tol = tol or Tolerance.default()
    lower = max(math.dist(P.start, Q.start), math.dist(P.end, Q.end))
    if decide_frechet(P, Q, lower, tol):
        return lower
    upper = float(cdist(P.vertices, Q.vertices).max())
    lo, hi = lower, upper
    iterations = 0
    while hi - lo > tol.abs_tol and iterations < settings_lib.bisection_max_iter:
        mid = (lo + hi) / 2
        if decide_frechet(P, Q, mid, tol):
            hi = mid
        else:
            lo = mid
        iterations += 1
    logger.debug("bisection bracket [%r, %r] after %d steps", lo, hi, iterations)
    values = critical_values(P, Q)
    for value in values[(values >= lo) & (values <= hi)]:
        if decide_frechet(P, Q, float(value), tol):
            return float(value)
    return hi


def discrete_frechet(
    P: Union[Polyline, Sequence[Sequence[float]], np.ndarray],
    Q: Union[Polyline, Sequence[Sequence[float]], np.ndarray],
) -> float:
    """Discrete Fréchet distance (Eiter and Mannila coupling table).

    Single-vertex inputs are accepted.
    """
    A = P.vertices if isinstance(P, Polyline) else np.atleast_2d(np.asarray(P, dtype=float))
    B = Q.vertices if isinstance(Q, Polyline) else np.atleast_2d(np.asarray(Q, dtype=float))
    if len(A) == 0 or len(B) == 0:
        raise ValueError("vertices must not be empty")
    dist = cdist(A, B)
    n, m = dist.shape
    table = np.empty((n, m))
    table[0, 0] = dist[0, 0]
    for i in range(1, n):
        table[i, 0] = max(table[i - 1, 0], dist[i, 0])
    for j in range(1, m):
        table[0, j] = max(table[0, j - 1], dist[0, j])
    for i in range(1, n):
        for j in range(1, m):
            table[i, j] = max(
                min(table[i - 1, j], table[i, j - 1], table[i - 1, j - 1]), dist[i, j]
            )
    return float(table[-1, -1])


def segment_frechet_decision(
    a: Sequence[float],
    b: Sequence[float],
    points: np.ndarray,
    eps: float,
    tol: Optional[Tolerance] = None,
) -> bool:
    """Whether the segment a->b is within Fréchet distance eps of the polyline ``points``.

    Every vertex of the polyline needs a matching parameter on the segment;
    those parameters must be choosable in non-decreasing order.
    """
    tol = tol or Tolerance.default()
    points = np.asarray(points, dtype=float)
    limit = eps + tol.abs_tol
    if math.dist(a, points[0]) > limit or math.dist(b, points[-1]) > limit:
        return False
    lo, hi = balls_segment_intersection(points, eps, Segment(Point(*a), Point(*b)), tol)
    if np.isnan(lo).any():
        return False
    lo[0] = 0.0
    return bool(np.all(np.maximum.accumulate(lo) <= hi + tol.abs_tol))
