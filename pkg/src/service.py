import logging
from typing import Dict, List, Optional, Type

import numpy as np

from .decorators import timed
from .exceptions import BudgetExceededException
from .file_storage import TrackStorage
from .frechet import decide_frechet, discrete_frechet, frechet_distance
from .geom import Polyline, Tolerance
from .models import (
    Command,
    OracleBudget,
    OracleSuite,
    PMeanResult,
    RunConfig,
    RunStatus,
    RunSummary,
    SimplificationAlgorithm,
    SimplificationResult,
    VertexMode,
)
from .oracle import brute_force_discrete_frechet, brute_force_min_k, brute_force_pmean, exact_frechet_by_events
from .pmean import chunked_pmean, exact_pmean_small, pairwise_pmean, simplify_then_pmean, two_curve_pmean
from .simplify import min_eps_simplify, min_k_simplify
from .utils import get_rng, random_vertices, settings_lib

logger = logging.getLogger(__name__)

__all__ = [
    "BaseCommand",
    "FrechetCommand",
    "SimplifyCommand",
    "PMeanCommand",
    "ChunkedCommand",
    "OracleCheckCommand",
    "command_for",
]


class BaseCommand:
    """Runs one sub-command: load tracks, call the library, self-check, write artifacts"""

    command: Command
    summary_klass: Type[RunSummary] = RunSummary
    storage_klass: Type[TrackStorage] = TrackStorage

    def __init__(self, config: RunConfig, tol: Optional[Tolerance] = None):
        self.config = config
        self.tol = tol or Tolerance.default()
        self.storage = self.storage_klass(self.tol)

    def load(self) -> List[Polyline]:
        return [self.storage.ingest(path, self.config.input_format) for path in self.config.inputs]

    def slack(self, value: float) -> float:
        return max(self.tol.abs_tol, 1e-6 * max(1.0, abs(value)))

    def execute(self) -> RunSummary:
        raise NotImplementedError

    def write_artifacts(self, original: Polyline, result: Optional[Polyline]):
        """Writes the result CSV and SVG when the config asks for them"""
        if result is None:
            return
        if self.config.output:
            self.storage.write_csv(result, self.config.output)
        if self.config.svg:
            self.storage.emit_svg(original, result, self.config.svg)

    @timed
    def run(self) -> RunSummary:
        """Executes the command and writes the summary

        Returns:
            RunSummary: status FAILED when a contract self-check did not hold
        """
        summary = self.execute()
        summary.eps = self.config.eps
        summary.delta = self.config.delta
        summary.k = self.config.k
        if not summary.self_check:
            summary.status = RunStatus.FAILED
            logger.warning("%s: self-check failed", self.command.value)
        return summary

    def summary(self, **fields) -> RunSummary:
        return self.summary_klass(command=self.command, **fields)


class FrechetCommand(BaseCommand):
    command = Command.FRECHET

    def execute(self) -> RunSummary:
        P, Q = self.load()
        value = frechet_distance(P, Q, self.tol)
        ok = decide_frechet(P, Q, value + self.slack(value), self.tol)
        if self.config.svg:
            self.storage.emit_svg(P, Q, self.config.svg)
        return self.summary(achieved_eps=value, self_check=ok)


class SimplifyCommand(BaseCommand):
    command = Command.SIMPLIFY

    def simplify(self, P: Polyline) -> SimplificationResult:
        config = self.config
        if config.k is not None:
            return min_eps_simplify(P, config.k, config.delta, config.mode, self.tol)
        return min_k_simplify(P, config.eps, config.mode, config.delta, self.tol)

    def execute(self) -> RunSummary:
        (P,) = self.load()
        result = self.simplify(P)
        ok = result.verify(P, self.tol)
        if result.target_eps is not None:
            ok = ok and result.achieved_eps <= result.target_eps + self.slack(result.target_eps)
        if result.algorithm == SimplificationAlgorithm.MIN_EPS:
            ok = ok and result.links <= self.config.k
        self.write_artifacts(P, result.curve)
        return self.summary(
            achieved_eps=result.achieved_eps,
            links=result.links,
            output_size=len(result.curve),
            event_count=result.event_count,
            mode=result.mode,
            self_check=ok,
        )


class PMeanCommand(BaseCommand):
    """Exact search for small instances with a link budget, the matching midpoint
    curve for two curves, the pairwise selection otherwise"""

    command = Command.PMEAN

    def mean(self, curves: List[Polyline]) -> PMeanResult:
        config = self.config
        small = len(curves) <= settings_lib.exact_max_curves and all(
            len(curve) <= settings_lib.exact_max_vertices for curve in curves
        )
        if config.k is not None and small:
            return exact_pmean_small(curves, config.p, config.delta, config.k, self.tol)
        if len(curves) == 2 and config.k is None:
            return two_curve_pmean(curves[0], curves[1], config.p, self.tol)
        return pairwise_pmean(curves, config.p, config.eps, config.k, config.delta, config.mode, self.tol)

    def execute(self) -> RunSummary:
        curves = self.load()
        result = self.mean(curves)
        ok = result.verify(curves, self.tol)
        if self.config.k is not None:
            ok = ok and len(result.curve) - 1 <= self.config.k
        self.write_artifacts(curves[0], result.curve)
        return self.summary(
            achieved_eps=max(result.per_curve_distance),
            cost=result.cost,
            per_curve_distance=result.per_curve_distance,
            links=len(result.curve) - 1,
            output_size=len(result.curve),
            p=str(result.p),
            self_check=ok,
        )


class ChunkedCommand(BaseCommand):
    command = Command.CHUNKED

    def execute(self) -> RunSummary:
        config = self.config
        curves = self.load()
        result = chunked_pmean(
            curves,
            chunk_size=config.chunk_size,
            eps=config.eps,
            delta=config.delta,
            p=config.p,
            operation=config.operation,
            refine=config.refine,
            merge=config.merge,
            k=config.k,
            tol=self.tol,
        )
        ok = result.verify(curves, self.tol)
        if len(curves) == 1:
            ok = ok and result.per_curve_distance[0] <= result.error_bound + self.slack(result.error_bound)
        self.write_artifacts(curves[0], result.curve)
        return self.summary(
            achieved_eps=max(result.per_curve_distance),
            cost=result.cost,
            per_curve_distance=result.per_curve_distance,
            links=len(result.curve) - 1,
            output_size=len(result.curve),
            p=str(result.p),
            mode=VertexMode.ANY_PLANE_POINT if config.refine else None,
            self_check=ok,
        )


class OracleCheckCommand(BaseCommand):
    """Seeded random cross-checks of the fast paths against brute force"""

    command = Command.ORACLE_CHECK

    def __init__(self, config: RunConfig, tol: Optional[Tolerance] = None):
        super().__init__(config, tol)
        self.budget = OracleBudget(
            max_candidates=settings_lib.oracle_max_candidates, max_checks=settings_lib.oracle_max_checks
        )

    def _curve(self, rng: np.random.Generator, low: int, high: int) -> Polyline:
        return Polyline(random_vertices(rng, int(rng.integers(low, high + 1))), self.tol)

    def check_frechet(self, rng: np.random.Generator) -> bool:
        P, Q = self._curve(rng, 2, 5), self._curve(rng, 2, 5)
        value = frechet_distance(P, Q, self.tol)
        reference = exact_frechet_by_events(P, Q, self.tol)
        return abs(value - reference) <= 1e-6 * max(1.0, reference)

    def check_discrete(self, rng: np.random.Generator) -> bool:
        P, Q = self._curve(rng, 2, 6), self._curve(rng, 2, 6)
        return discrete_frechet(P, Q) == brute_force_discrete_frechet(P, Q, self.budget)

    def check_simplify(self, rng: np.random.Generator) -> bool:
        P = self._curve(rng, 6, 6)
        eps = float(rng.uniform(0.05, 1.0))
        fast = min_k_simplify(P, eps, VertexMode.INPUT_VERTICES, tol=self.tol)
        return fast.links == brute_force_min_k(P, eps, VertexMode.INPUT_VERTICES, budget=self.budget, tol=self.tol)

    def check_pmean(self, rng: np.random.Generator) -> bool:
        P, Q = self._curve(rng, 2, 3), self._curve(rng, 2, 3)
        half = frechet_distance(P, Q, self.tol) / 2
        two_curve = two_curve_pmean(P, Q, "inf", self.tol)
        if abs(two_curve.cost - half) > 1e-6 * max(1.0, half):
            return False
        optimum = brute_force_pmean([P, Q], "inf", k=1, grid=0.25, budget=self.budget, tol=self.tol)
        slack = 1e-6 * max(1.0, optimum)
        errors = [min_eps_simplify(curve, 1, tol=self.tol).achieved_eps for curve in (P, Q)]
        simplified = simplify_then_pmean([P, Q], "inf", k=1, tol=self.tol)
        return (
            two_curve.cost <= optimum + slack
            and pairwise_pmean([P, Q], "inf", tol=self.tol).cost <= 3 * optimum + slack
            and simplified.cost <= optimum + 2 * max(errors) + slack
        )

    def suites(self) -> List[OracleSuite]:
        if self.config.suite == OracleSuite.ALL:
            return [suite for suite in OracleSuite if suite != OracleSuite.ALL]
        return [self.config.suite]

    def execute(self) -> RunSummary:
        checks: Dict[str, Dict[str, int]] = {}
        for suite in self.suites():
            rng = get_rng(self.config.seed)
            check = getattr(self, f"check_{suite.value}")
            passed = skipped = 0
            for _ in range(self.config.trials):
                try:
                    passed += bool(check(rng))
                except BudgetExceededException:
                    skipped += 1
            checks[suite.value] = {"passed": passed, "skipped": skipped, "trials": self.config.trials}
            logger.info("oracle suite %s: %d/%d passed", suite.value, passed, self.config.trials)
        ok = all(entry["passed"] + entry["skipped"] == entry["trials"] for entry in checks.values())
        return self.summary(checks=checks, self_check=ok)


_COMMANDS: Dict[Command, Type[BaseCommand]] = {
    klass.command: klass
    for klass in (FrechetCommand, SimplifyCommand, PMeanCommand, ChunkedCommand, OracleCheckCommand)
}


def command_for(config: RunConfig, tol: Optional[Tolerance] = None) -> BaseCommand:
    return _COMMANDS[config.command](config, tol)
