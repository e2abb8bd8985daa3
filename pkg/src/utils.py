import logging
import math
import time
from contextlib import contextmanager
from typing import Iterable, Iterator, List, Optional

import numpy as np

from src.config import settings

logger = logging.getLogger(__name__)

settings_lib = settings.Settings()

__all__ = [
    "settings_lib",
    "get_rng",
    "quantize_up",
    "quantize",
    "unique_sorted",
    "random_vertices",
    "stopwatch",
]


def get_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Seeded generator, falling back to the configured seed"""
    return np.random.default_rng(settings_lib.seed if seed is None else seed)


def quantize_up(value: float, delta: Optional[float]) -> float:
    """Rounds value up to the next multiple of delta

    Args:
        value (float): non-negative quantity, usually an error candidate
        delta (Optional[float]): rounding step, None or 0 disables rounding

    Returns:
        float: smallest multiple of delta that is >= value
    """
    if not delta:
        return float(value)
    steps = math.ceil(value / delta - 1e-9)
    return max(steps, 0) * delta


def quantize(value: float, delta: Optional[float]) -> float:
    """Rounds value to the nearest multiple of delta"""
    if not delta:
        return float(value)
    return round(value / delta) * delta


def unique_sorted(values: Iterable[float], atol: float) -> List[float]:
    """Sorted values with neighbours closer than atol merged"""
    merged: List[float] = []
    for value in sorted(values):
        if not merged or value - merged[-1] > atol:
            merged.append(float(value))
    return merged


def random_vertices(
    rng: np.random.Generator, n: int, scale: float = 1.0, walk: bool = True
) -> np.ndarray:
    """Random planar vertex sequence used by tests and the oracle suite

    Args:
        rng (np.random.Generator): source of randomness
        n (int): number of vertices
        scale (float): coordinate scale
        walk (bool): random walk when True, uniform cloud otherwise

    Returns:
        np.ndarray: (n, 2) float array
    """
    if walk:
        steps = rng.normal(scale=scale / 2, size=(n, 2))
        steps[:, 0] += scale / 2
        return np.cumsum(steps, axis=0)
    return rng.uniform(0, scale, size=(n, 2))


@contextmanager
def stopwatch() -> Iterator[dict]:
    """Measures wall time of the enclosed block into ``result["seconds"]``"""
    result = {"seconds": 0.0}
    started = time.perf_counter()
    try:
        yield result
    finally:
        result["seconds"] = time.perf_counter() - started
        logger.debug("block took %.4fs", result["seconds"])
