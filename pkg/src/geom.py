"""Planar primitives shared by every other module.

All comparisons go through a single :class:`Tolerance` record so that ties
are broken the same way everywhere.
"""

import logging
import math
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, root_validator

from .exceptions import InvalidPolylineException
from .utils import settings_lib

logger = logging.getLogger(__name__)

__all__ = [
    "Tolerance",
    "Point",
    "Segment",
    "Polyline",
    "Interval",
    "distance",
    "unit_direction",
    "point_segment_distance",
    "point_polyline_distance",
    "ball_segment_intersection",
    "ball_edges_intersection",
    "balls_segment_intersection",
    "collinear_continuation",
    "same_direction",
    "ray_segment_intersection",
    "reflect_direction",
]

Interval = Tuple[float, float]


class Tolerance(BaseModel):
    abs_tol: float = Field(default_factory=lambda: settings_lib.tol, ge=0)
    rel_tol: float = Field(default_factory=lambda: settings_lib.rel_tol, ge=0)

    class Config:
        allow_mutation = False

    @root_validator
    def check_usable(cls, values: dict):
        abs_tol, rel_tol = values.get("abs_tol"), values.get("rel_tol")
        if abs_tol is None or rel_tol is None:
            return values
        if not (math.isfinite(abs_tol) and math.isfinite(rel_tol)):
            raise ValueError("tolerances must be finite")
        if abs_tol == 0 and rel_tol == 0:
            raise ValueError("abs_tol and rel_tol cannot both be zero")
        return values

    @classmethod
    def default(cls) -> "Tolerance":
        return cls(abs_tol=settings_lib.tol, rel_tol=settings_lib.rel_tol)

    def close(self, a: float, b: float) -> bool:
        return abs(a - b) <= max(self.abs_tol, self.rel_tol * max(abs(a), abs(b)))

    def __hash__(self):
        return hash((self.abs_tol, self.rel_tol))


class Point(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    a: Point
    b: Point


class Polyline:
    """Ordered vertex sequence in the plane.

    Consecutive duplicate vertices (closer than ``tol.abs_tol``) are merged on
    construction, so every edge has positive length. Positions on the curve
    are addressed either by arc length or by a *global parameter* ``x`` in
    ``[0, n-1]`` whose integer part is the edge index and whose fraction is the
    position on that edge.
    """

    __slots__ = ("_vertices", "_arc")

    def __init__(
        self,
        vertices: Union["Polyline", Sequence[Sequence[float]], np.ndarray],
        tol: Optional[Tolerance] = None,
        allow_single: bool = False,
    ):
        if isinstance(vertices, Polyline):
            array = vertices.vertices.copy()
        else:
            array = np.asarray(vertices, dtype=float)
        if array.ndim != 2 or array.shape[-1] != 2 or len(array) == 0:
            raise InvalidPolylineException("vertices must be a non-empty (n, 2) array")
        if not np.all(np.isfinite(array)):
            raise InvalidPolylineException("vertex coordinates must be finite")
        atol = (tol or Tolerance.default()).abs_tol
        steps = np.hypot(*np.diff(array, axis=0).T) if len(array) > 1 else np.empty(0)
        keep = np.concatenate([[True], steps > atol])
        array = np.ascontiguousarray(array[keep])
        if len(array) < 2 and not allow_single:
            raise InvalidPolylineException("a polyline needs at least 2 distinct vertices")
        array.setflags(write=False)
        self._vertices = array
        lengths = np.hypot(*np.diff(array, axis=0).T) if len(array) > 1 else np.empty(0)
        self._arc = np.concatenate([[0.0], np.cumsum(lengths)])

    @classmethod
    def __get_validators__(cls):
        """Get validators for Polyline"""
        yield cls.validate

    @classmethod
    def validate(cls, v):
        if isinstance(v, cls):
            return v
        return cls(v)

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def n_edges(self) -> int:
        return len(self._vertices) - 1

    @property
    def length(self) -> float:
        return float(self._arc[-1])

    @property
    def edge_lengths(self) -> np.ndarray:
        return np.diff(self._arc)

    def __len__(self) -> int:
        return len(self._vertices)

    def __getitem__(self, index: int) -> Point:
        x, y = self._vertices[index]
        return Point(float(x), float(y))

    def __iter__(self) -> Iterator[Point]:
        for x, y in self._vertices:
            yield Point(float(x), float(y))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polyline):
            return NotImplemented
        return self._vertices.shape == other._vertices.shape and bool(
            np.array_equal(self._vertices, other._vertices)
        )

    def __hash__(self):
        return hash(self._vertices.tobytes())

    def __repr__(self) -> str:
        return f"Polyline({self._vertices.tolist()!r})"

    @property
    def start(self) -> Point:
        return self[0]

    @property
    def end(self) -> Point:
        return self[len(self) - 1]

    def edge(self, i: int) -> Segment:
        return Segment(self[i], self[i + 1])

    def edges(self) -> List[Segment]:
        return [self.edge(i) for i in range(self.n_edges)]

    def arc_length(self, i: int) -> float:
        """Arc length from the start up to vertex i"""
        return float(self._arc[i])

    def split_position(self, x: float) -> Tuple[int, float]:
        """Global parameter to (edge index, fraction on that edge)"""
        last = self.n_edges - 1
        x = min(max(float(x), 0.0), float(self.n_edges))
        edge = min(int(math.floor(x)), last)
        return edge, x - edge

    def point_at(self, x: float) -> Point:
        """Point at global parameter x"""
        edge, t = self.split_position(x)
        a, b = self._vertices[edge], self._vertices[edge + 1]
        return Point(float(a[0] + t * (b[0] - a[0])), float(a[1] + t * (b[1] - a[1])))

    def arc_position(self, x: float) -> float:
        """Arc length at global parameter x"""
        edge, t = self.split_position(x)
        return float(self._arc[edge] + t * (self._arc[edge + 1] - self._arc[edge]))

    def position_of_arc(self, s: float) -> float:
        """Global parameter at arc length s"""
        s = min(max(float(s), 0.0), self.length)
        edge = int(np.searchsorted(self._arc, s, side="right")) - 1
        edge = min(max(edge, 0), self.n_edges - 1)
        span = self._arc[edge + 1] - self._arc[edge]
        return edge + (s - self._arc[edge]) / span

    def subcurve(self, x0: float, x1: float) -> "Polyline":
        """Part of the curve between global parameters x0 <= x1"""
        points = [self.point_at(x0)]
        first, last = int(math.floor(x0)) + 1, int(math.ceil(x1))
        points.extend(self[i] for i in range(first, last))
        points.append(self.point_at(x1))
        return Polyline(points, allow_single=True)

    def bounds(self) -> Tuple[Point, Point]:
        low, high = self._vertices.min(axis=0), self._vertices.max(axis=0)
        return Point(*map(float, low)), Point(*map(float, high))

    def translated(self, dx: float, dy: float) -> "Polyline":
        return Polyline(self._vertices + np.array([dx, dy]))

    def reversed(self) -> "Polyline":
        return Polyline(self._vertices[::-1])


def distance(p: Sequence[float], q: Sequence[float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def unit_direction(a: Sequence[float], b: Sequence[float]) -> Optional[Point]:
    """Unit vector from a to b, None for coincident points"""
    dx, dy = b[0] - a[0], b[1] - a[1]
    norm = math.hypot(dx, dy)
    if norm == 0:
        return None
    return Point(dx / norm, dy / norm)


def point_segment_distance(p: Sequence[float], s: Segment) -> float:
    (ax, ay), (bx, by) = s
    dx, dy = bx - ax, by - ay
    length_sq = dx * dx + dy * dy
    if length_sq == 0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / length_sq
    t = min(max(t, 0.0), 1.0)
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


def point_polyline_distance(p: Sequence[float], polyline: Polyline) -> float:
    """Distance from p to the closest point of the polyline"""
    vertices = polyline.vertices
    starts, ends = vertices[:-1], vertices[1:]
    d = ends - starts
    length_sq = np.einsum("ij,ij->i", d, d)
    rel = np.asarray(p, dtype=float) - starts
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(length_sq > 0, np.einsum("ij,ij->i", rel, d) / length_sq, 0.0)
    t = np.clip(t, 0.0, 1.0)
    foot = starts + t[:, None] * d
    return float(np.min(np.hypot(*(foot - np.asarray(p, dtype=float)).T)))


def ball_segment_intersection(
    c: Sequence[float], r: float, s: Segment, tol: Optional[Tolerance] = None
) -> Optional[Interval]:
    """Parameters t in [0, 1] of points of s within distance r of c.

    Args:
        c (Sequence[float]): disk centre
        r (float): disk radius, >= 0
        s (Segment): segment, possibly degenerate
        tol (Optional[Tolerance]): comparison tolerance

    Returns:
        Optional[Interval]: closed interval (t_lo, t_hi), None when empty
    """
    atol = (tol or Tolerance.default()).abs_tol
    (ax, ay), (bx, by) = s
    dx, dy = bx - ax, by - ay
    length_sq = dx * dx + dy * dy
    if length_sq == 0:
        return (0.0, 1.0) if math.hypot(c[0] - ax, c[1] - ay) <= r + atol else None
    t_line = ((c[0] - ax) * dx + (c[1] - ay) * dy) / length_sq
    t_foot = min(max(t_line, 0.0), 1.0)
    if math.hypot(c[0] - (ax + t_foot * dx), c[1] - (ay + t_foot * dy)) > r + atol:
        return None
    perp_sq = (c[0] - (ax + t_line * dx)) ** 2 + (c[1] - (ay + t_line * dy)) ** 2
    half = math.sqrt(max(r * r - perp_sq, 0.0) / length_sq)
    lo, hi = max(t_line - half, 0.0), min(t_line + half, 1.0)
    if lo > hi:
        lo = hi = t_foot
    return lo, hi


def ball_edges_intersection(
    c: Sequence[float],
    r: float,
    starts: np.ndarray,
    ends: np.ndarray,
    tol: Optional[Tolerance] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`ball_segment_intersection` over many segments.

    Returns:
        Tuple[np.ndarray, np.ndarray]: lo and hi arrays, NaN where empty
    """
    atol = (tol or Tolerance.default()).abs_tol
    c = np.asarray(c, dtype=float)
    d = ends - starts
    length_sq = np.einsum("ij,ij->i", d, d)
    rel = c - starts
    degenerate = length_sq == 0
    safe = np.where(degenerate, 1.0, length_sq)
    t_line = np.einsum("ij,ij->i", rel, d) / safe
    t_foot = np.clip(t_line, 0.0, 1.0)
    foot_gap = np.hypot(*(starts + t_foot[:, None] * d - c).T)
    perp_sq = np.sum((starts + t_line[:, None] * d - c) ** 2, axis=1)
    half = np.sqrt(np.maximum(r * r - perp_sq, 0.0) / safe)
    lo = np.maximum(t_line - half, 0.0)
    hi = np.minimum(t_line + half, 1.0)
    crossed = lo > hi
    lo = np.where(crossed, t_foot, lo)
    hi = np.where(crossed, t_foot, hi)
    lo = np.where(degenerate, 0.0, lo)
    hi = np.where(degenerate, 1.0, hi)
    gap = np.where(degenerate, np.hypot(*(starts - c).T), foot_gap)
    empty = gap > r + atol
    lo[empty] = np.nan
    hi[empty] = np.nan
    return lo, hi


def same_direction(u: Optional[Sequence[float]], v: Optional[Sequence[float]], tol: Tolerance) -> bool:
    if u is None or v is None:
        return False
    return math.hypot(u[0] - v[0], u[1] - v[1]) <= max(tol.abs_tol, tol.rel_tol)


def collinear_continuation(
    a: Sequence[float], b: Sequence[float], c: Sequence[float], tol: Optional[Tolerance] = None
) -> bool:
    """True iff b->c keeps the unit direction of a->b (reversals are not continuations)"""
    return same_direction(unit_direction(a, b), unit_direction(b, c), tol or Tolerance.default())


def ray_segment_intersection(
    origin: Sequence[float], direction: Sequence[float], s: Segment, tol: Optional[Tolerance] = None
) -> Optional[Tuple[float, float]]:
    """Hit of the ray origin + u*direction (u > 0) with segment s.

    Returns:
        Optional[Tuple[float, float]]: (u along the ray, t along the segment)
    """
    atol = (tol or Tolerance.default()).abs_tol
    (ax, ay), (bx, by) = s
    ex, ey = bx - ax, by - ay
    denom = direction[0] * ey - direction[1] * ex
    if abs(denom) <= atol * max(1.0, math.hypot(ex, ey)):
        return None
    wx, wy = ax - origin[0], ay - origin[1]
    u = (wx * ey - wy * ex) / denom
    t = (wx * direction[1] - wy * direction[0]) / denom
    if u <= atol or t < -atol or t > 1 + atol:
        return None
    return u, min(max(t, 0.0), 1.0)


def reflect_direction(direction: Sequence[float], s: Segment) -> Optional[Point]:
    """Mirror image of direction with respect to the line through s"""
    u = unit_direction(s.a, s.b)
    if u is None:
        return None
    dot = direction[0] * u[0] + direction[1] * u[1]
    return Point(2 * dot * u[0] - direction[0], 2 * dot * u[1] - direction[1])


def balls_segment_intersection(
    centers: np.ndarray, r: float, s: Segment, tol: Optional[Tolerance] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`ball_segment_intersection` of many disks against one segment.

    Returns:
        Tuple[np.ndarray, np.ndarray]: lo and hi arrays, NaN where empty
    """
    atol = (tol or Tolerance.default()).abs_tol
    centers = np.asarray(centers, dtype=float)
    a = np.asarray(s[0], dtype=float)
    d = np.asarray(s[1], dtype=float) - a
    length_sq = float(d @ d)
    rel = centers - a
    if length_sq == 0:
        inside = np.hypot(*rel.T) <= r + atol
        return np.where(inside, 0.0, np.nan), np.where(inside, 1.0, np.nan)
    t_line = rel @ d / length_sq
    t_foot = np.clip(t_line, 0.0, 1.0)
    gap = np.hypot(*(a + t_foot[:, None] * d - centers).T)
    perp_sq = np.sum((a + t_line[:, None] * d - centers) ** 2, axis=1)
    half = np.sqrt(np.maximum(r * r - perp_sq, 0.0) / length_sq)
    lo = np.maximum(t_line - half, 0.0)
    hi = np.minimum(t_line + half, 1.0)
    crossed = lo > hi
    lo = np.where(crossed, t_foot, lo)
    hi = np.where(crossed, t_foot, hi)
    empty = gap > r + atol
    lo[empty] = np.nan
    hi[empty] = np.nan
    return lo, hi
