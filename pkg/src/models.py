import math
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, root_validator, validator

from .decorators import as_arguments
from .fields import PExponent
from .geom import Point, Polyline, Tolerance

__all__ = [
    "VertexMode",
    "SimplificationAlgorithm",
    "PMeanAlgorithm",
    "NodeKind",
    "Command",
    "OracleSuite",
    "ChunkOperation",
    "TrackFormat",
    "RecordModel",
    "FreeSpaceCell",
    "MatchedPair",
    "Matching",
    "EventNode",
    "EventEdge",
    "EventGraph",
    "SimplificationResult",
    "PMeanResult",
    "OracleBudget",
    "RunConfig",
    "RunStatus",
    "RunSummary",
    "ErrorModel",
]


class VertexMode(str, Enum):
    INPUT_VERTICES = "input"
    ONE_CURVE_VERTICES = "curve"
    ANY_PLANE_POINT = "plane"


class SimplificationAlgorithm(str, Enum):
    MIN_K = "min_k"
    MIN_EPS = "min_eps"
    BICRITERIA = "bicriteria"
    GREEDY = "greedy"
    IMAI_IRI = "imai_iri"
    CHUNKED = "chunked"


class PMeanAlgorithm(str, Enum):
    TWO_CURVE_EXACT = "two_curve_exact"
    PAIRWISE = "pairwise"
    SIMPLIFY_THEN_MEAN = "simplify_then_mean"
    EXACT_SMALL = "exact_small"
    CHUNKED = "chunked"


class NodeKind(str, Enum):
    SOURCE = "source"
    EVENT = "event"
    SINK = "sink"


class Command(str, Enum):
    FRECHET = "frechet"
    SIMPLIFY = "simplify"
    PMEAN = "pmean"
    CHUNKED = "chunked"
    ORACLE_CHECK = "oracle-check"


class OracleSuite(str, Enum):
    FRECHET = "frechet"
    DISCRETE = "discrete"
    SIMPLIFY = "simplify"
    PMEAN = "pmean"
    ALL = "all"


class ChunkOperation(str, Enum):
    BICRITERIA = "bicriteria"
    MIN_K = "min_k"
    IMAI_IRI = "imai_iri"
    MEAN = "mean"


class TrackFormat(str, Enum):
    AUTO = "auto"
    CSV = "csv"
    WHITESPACE = "whitespace"


def _encode_polyline(polyline: Polyline) -> list:
    return polyline.vertices.tolist()


class RecordModel(BaseModel):
    class Config:
        allow_population_by_field_name = True
        arbitrary_types_allowed = True
        json_encoders = {
            Polyline: _encode_polyline,
            np.ndarray: lambda v: v.tolist(),
            datetime: lambda v: v.isoformat(),
            PExponent: str,
        }


def _check_unit_interval(value: Optional[Tuple[float, float]]):
    if value is None:
        return value
    lo, hi = value
    if not (-1e-9 <= lo <= hi + 1e-12 and hi <= 1 + 1e-9):
        raise ValueError(f"free interval {value} is not a sub-interval of [0, 1]")
    return value


class FreeSpaceCell(RecordModel):
    """Free intervals on the four boundaries of cell (i, j), None when empty"""

    i: int = Field(..., ge=0)
    j: int = Field(..., ge=0)
    left: Optional[Tuple[float, float]]
    right: Optional[Tuple[float, float]]
    bottom: Optional[Tuple[float, float]]
    top: Optional[Tuple[float, float]]

    _intervals = validator("left", "right", "bottom", "top", allow_reuse=True)(
        _check_unit_interval
    )

    @property
    def is_blocked(self) -> bool:
        return all(v is None for v in (self.left, self.right, self.bottom, self.top))


class MatchedPair(RecordModel):
    s: float = Field(..., ge=0, description="arc length on P")
    t: float = Field(..., ge=0, description="arc length on Q")
    p: Point
    q: Point

    @property
    def gap(self) -> float:
        return math.hypot(self.p.x - self.q.x, self.p.y - self.q.y)


class Matching(RecordModel):
    pairs: List[MatchedPair]

    @validator("pairs")
    def check_monotone(cls, pairs: List[MatchedPair]):
        if not pairs:
            raise ValueError("a matching has at least one pair")
        for before, after in zip(pairs, pairs[1:]):
            slack = 1e-9 * max(1.0, before.s, before.t)
            if after.s < before.s - slack or after.t < before.t - slack:
                raise ValueError("matching is not monotone")
        return pairs

    @property
    def max_distance(self) -> float:
        return max(pair.gap for pair in self.pairs)

    @property
    def s_values(self) -> List[float]:
        return [pair.s for pair in self.pairs]

    @property
    def t_values(self) -> List[float]:
        return [pair.t for pair in self.pairs]


class EventNode(RecordModel):
    """A free point of the (multi-curve) free space.

    ``positions`` holds one global curve parameter per reference curve; the
    integer part is the cell index along that curve and the fraction is the
    position ``t`` on the cell boundary.
    """

    candidate: int = Field(..., ge=-1, description="index into the candidate list")
    plane_point: Point
    positions: Tuple[float, ...]
    dir_class: Optional[Point] = None
    kind: NodeKind = NodeKind.EVENT

    class Config:
        allow_mutation = False

    @property
    def cell(self) -> Tuple[int, ...]:
        return tuple(int(math.floor(x)) for x in self.positions)

    @property
    def t(self) -> Tuple[float, ...]:
        return tuple(x - math.floor(x) for x in self.positions)


class EventEdge(RecordModel):
    source: int
    target: int
    weight: int = Field(..., ge=0, le=1)


class EventGraph(RecordModel):
    nodes: List[EventNode] = []
    edges: List[EventEdge] = []
    sources: List[int] = []
    sinks: List[int] = []
    candidate_count: int = 0

    @property
    def event_count(self) -> int:
        return self.candidate_count

    def adjacency(self) -> List[List[EventEdge]]:
        out: List[List[EventEdge]] = [[] for _ in self.nodes]
        for edge in self.edges:
            out[edge.source].append(edge)
        return out


class SimplificationResult(RecordModel):
    curve: Polyline
    links: Optional[int]
    achieved_eps: float = Field(..., ge=0)
    target_eps: Optional[float]
    mode: VertexMode = VertexMode.INPUT_VERTICES
    algorithm: SimplificationAlgorithm = SimplificationAlgorithm.MIN_K
    event_count: int = 0

    @root_validator
    def count_links(cls, values: dict):
        curve = values.get("curve")
        if curve is not None:
            values["links"] = len(curve) - 1
        return values

    def verify(self, original: Polyline, tol: Optional[Tolerance] = None) -> bool:
        """Recomputes the error against ``original`` and checks the endpoints"""
        from .frechet import frechet_distance

        tol = tol or Tolerance.default()
        same_ends = np.allclose(self.curve.start, original.start, atol=tol.abs_tol) and np.allclose(
            self.curve.end, original.end, atol=tol.abs_tol
        )
        measured = frechet_distance(self.curve, original, tol)
        return bool(same_ends) and measured <= self.achieved_eps + max(tol.abs_tol, 1e-6)


class PMeanResult(RecordModel):
    curve: Polyline
    per_curve_distance: List[float]
    cost: Optional[float]
    p: PExponent = PExponent(2)
    algorithm: PMeanAlgorithm
    eps_vector: Optional[List[float]]
    error_bound: Optional[float]
    selected_index: Optional[int]

    @root_validator
    def compute_cost(cls, values: dict):
        distances, p = values.get("per_curve_distance"), values.get("p")
        if distances is not None and p is not None and values.get("cost") is None:
            values["cost"] = p.norm(distances)
        return values

    def verify(self, curves: List[Polyline], tol: Optional[Tolerance] = None) -> bool:
        """Recomputes every distance and the cost from scratch"""
        from .frechet import frechet_distance

        tol = tol or Tolerance.default()
        slack = max(tol.abs_tol, 1e-6)
        measured = [frechet_distance(self.curve, curve, tol) for curve in curves]
        if any(abs(a - b) > slack for a, b in zip(measured, self.per_curve_distance)):
            return False
        return abs(self.p.norm(measured) - self.cost) <= slack * len(curves)


class OracleBudget(RecordModel):
    max_vertices: int = Field(8, gt=0)
    max_curves: int = Field(3, gt=0)
    grid_resolution: float = Field(0.05, gt=0)
    max_candidates: int = Field(10_000, gt=0)
    max_checks: int = Field(2_000_000, gt=0)


@as_arguments
class RunConfig(RecordModel):
    command: Command = Field(..., description="sub-command to run", positional=True)
    inputs: List[Path] = Field(
        [], description="track files (x y [extra columns] per row)", positional=True
    )
    eps: Optional[float] = Field(None, description="simplification error")
    delta: float = Field(1e-6, description="rounding step for event positions and errors")
    k: Optional[int] = Field(None, description="link budget")
    p: PExponent = Field(PExponent(2), description="exponent of the L_p cost, or inf")
    chunk_size: int = Field(30, description="vertices per chunk")
    mode: VertexMode = Field(VertexMode.INPUT_VERTICES, description="allowed vertex positions")
    operation: ChunkOperation = Field(
        ChunkOperation.BICRITERIA, description="per-chunk operation"
    )
    refine: bool = Field(False, description="re-simplify every chunk in plane mode")
    merge: bool = Field(False, description="re-simplify the concatenated chunks once more")
    suite: OracleSuite = Field(OracleSuite.ALL, description="oracle cross-check suite")
    trials: int = Field(20, description="random instances per oracle suite")
    seed: int = Field(0, description="random seed")
    output: Optional[Path] = Field(None, description="result polyline CSV")
    summary: Optional[Path] = Field(None, description="run summary JSON")
    svg: Optional[Path] = Field(None, description="SVG plot of input and result")
    input_format: TrackFormat = Field(TrackFormat.AUTO, description="column separator of the track files")
    verbose: bool = Field(False, description="debug logging")

    @validator("eps")
    def check_eps(cls, value):
        if value is not None and not (value >= 0 and math.isfinite(value)):
            raise ValueError("eps must be a finite number >= 0")
        return value

    @validator("delta")
    def check_delta(cls, value):
        if not value > 0:
            raise ValueError("delta must be > 0")
        return value

    @validator("k")
    def check_k(cls, value):
        if value is not None and value < 1:
            raise ValueError("k must be >= 1")
        return value

    @validator("chunk_size")
    def check_chunk_size(cls, value):
        if value < 2:
            raise ValueError("chunk_size must be >= 2")
        return value

    @validator("trials")
    def check_trials(cls, value):
        if value < 1:
            raise ValueError("trials must be >= 1")
        return value

    @root_validator(skip_on_failure=True)
    def check_command(cls, values: dict):
        command, inputs = values["command"], values["inputs"]
        needed = {
            Command.FRECHET: (2, 2),
            Command.SIMPLIFY: (1, 1),
            Command.PMEAN: (2, None),
            Command.CHUNKED: (1, None),
            Command.ORACLE_CHECK: (0, 0),
        }[command]
        low, high = needed
        if len(inputs) < low or (high is not None and len(inputs) > high):
            expected = low if low == high else f"at least {low}"
            raise ValueError(f"{command.value} expects {expected} input file(s)")
        if command == Command.SIMPLIFY and values["eps"] is None and values["k"] is None:
            raise ValueError("simplify needs --eps or --k")
        if command == Command.CHUNKED and values["eps"] is None:
            if values["operation"] != ChunkOperation.MEAN:
                raise ValueError("chunked needs --eps")
        if command == Command.PMEAN and values["eps"] is None and values["k"] is None:
            raise ValueError("pmean needs --eps or --k")
        return values


class RunStatus(str, Enum):
    SUCCESS = "success"
    FAILED = "failed"


class RunSummary(RecordModel):
    command: Command
    status: RunStatus = RunStatus.SUCCESS
    self_check: bool = True
    achieved_eps: Optional[float]
    links: Optional[int]
    output_size: Optional[int]
    cost: Optional[float]
    per_curve_distance: Optional[List[float]]
    event_count: Optional[int]
    eps: Optional[float]
    delta: Optional[float]
    k: Optional[int]
    p: Optional[str]
    mode: Optional[VertexMode]
    checks: Optional[dict]
    seconds: float = 0.0
    created_at: datetime = Field(default_factory=datetime.utcnow)


class ErrorModel(BaseModel):
    status: RunStatus = RunStatus.FAILED
    message: str
    details: Union[str, list, dict] = ""
    exit_code: int = 1
    timestamp: float = Field(default_factory=lambda: datetime.now().timestamp())
