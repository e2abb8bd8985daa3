import json
import math

import pytest
from pydantic import ValidationError

from src.fields import PExponent
from src.geom import Polyline
from src.models import (
    ChunkOperation,
    Command,
    ErrorModel,
    FreeSpaceCell,
    MatchedPair,
    Matching,
    PMeanAlgorithm,
    PMeanResult,
    RunConfig,
    RunStatus,
    RunSummary,
    SimplificationResult,
)


def _pair(s, t):
    return MatchedPair(s=s, t=t, p=(s, 0), q=(t, 1))


def test_matching_must_be_monotone():
    matching = Matching(pairs=[_pair(0, 0), _pair(1, 0.5), _pair(2, 2)])
    assert matching.max_distance == pytest.approx(math.hypot(0.5, 1))
    with pytest.raises(ValidationError):
        Matching(pairs=[_pair(0, 0), _pair(1, 1), _pair(0.5, 2)])


def test_free_space_cell_intervals():
    cell = FreeSpaceCell(i=0, j=1, left=(0.2, 0.4))
    assert not cell.is_blocked
    assert FreeSpaceCell(i=0, j=0).is_blocked
    with pytest.raises(ValidationError):
        FreeSpaceCell(i=0, j=0, left=(0.6, 0.4))
    with pytest.raises(ValidationError):
        FreeSpaceCell(i=0, j=0, top=(0.0, 1.5))


def test_simplification_result_counts_links():
    curve = Polyline([(0, 0), (1, 1), (2, 0)])
    result = SimplificationResult(curve=curve, achieved_eps=0.0, target_eps=0.1)
    assert result.links == 2
    payload = json.loads(result.json())
    assert payload["curve"] == [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]
    assert result.verify(curve)


def test_pmean_result_computes_cost():
    curve = Polyline([(0, 0.5), (1, 0.5)])
    result = PMeanResult(
        curve=curve, per_curve_distance=[3, 4], p=PExponent(2), algorithm=PMeanAlgorithm.PAIRWISE
    )
    assert result.cost == pytest.approx(5.0)
    assert json.loads(result.json())["p"] == 2.0


def test_run_config_defaults():
    config = RunConfig(command="simplify", inputs=["a.txt"], eps=1)
    assert config.delta == 1e-6
    assert config.p == 2
    assert config.chunk_size == 30
    assert config.operation == ChunkOperation.BICRITERIA


@pytest.mark.parametrize(
    "data",
    [
        {"command": "frechet", "inputs": ["a.txt"]},
        {"command": "simplify", "inputs": ["a.txt"]},
        {"command": "simplify", "inputs": ["a.txt"], "eps": -1},
        {"command": "simplify", "inputs": ["a.txt"], "eps": 1, "delta": 0},
        {"command": "simplify", "inputs": ["a.txt"], "k": 0},
        {"command": "pmean", "inputs": ["a.txt", "b.txt"], "k": 2, "p": 0.5},
        {"command": "chunked", "inputs": ["a.txt"], "chunk_size": 1, "eps": 1},
        {"command": "chunked", "inputs": ["a.txt"]},
        {"command": "oracle-check", "inputs": ["a.txt"]},
        {"command": "oracle-check", "trials": 0},
        {"command": "unknown"},
    ],
)
def test_run_config_rejects(data):
    with pytest.raises(ValidationError):
        RunConfig(**data)


def test_run_config_accepts_mean_without_eps():
    config = RunConfig(command="chunked", inputs=["a", "b"], operation="mean", p="inf")
    assert config.p.is_infinite
    assert config.command == Command.CHUNKED


def test_summary_and_error_serialise():
    summary = RunSummary(command=Command.FRECHET, achieved_eps=1.5)
    payload = json.loads(summary.json(exclude_none=True))
    assert payload["status"] == RunStatus.SUCCESS.value
    assert payload["achieved_eps"] == 1.5
    error = ErrorModel(message="boom", exit_code=2)
    assert json.loads(error.json())["status"] == "failed"
