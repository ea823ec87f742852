"""Series validation, normalization and quantile histogramming.

A series is represented as a one-dimensional ``float64`` numpy array.  Every
public function in the package routes its input through :func:`as_series`,
so callers may pass lists, tuples or arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def as_series(values, name: str = "series") -> np.ndarray:
    """Validate ``values`` and return them as a 1-d float array.

    Raises
    ------
    ValueError
        If the input is empty, not one-dimensional, or holds NaN/inf.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must contain at least one value")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class BinEdges:
    """Interior cut points of ``bin_count`` right-closed bins."""

    edges: np.ndarray
    bin_count: int

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        if self.bin_count < 2:
            raise ValueError("bin_count must be >= 2")
        if edges.shape != (self.bin_count - 1,):
            raise ValueError(
                f"expected {self.bin_count - 1} edges, got {edges.size}")
        if np.any(np.diff(edges) < 0):
            raise ValueError("edges must be non-decreasing")
        object.__setattr__(self, "edges", edges)


@dataclass(frozen=True)
class Histogram:
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def bin_count(self) -> int:
        return int(self.counts.size)


def znormalize(s) -> np.ndarray:
    """Zero mean, unit (population) standard deviation.

    A constant series maps to all zeros.
    """
    s = as_series(s)
    std = s.std()
    if std == 0.0:
        return np.zeros_like(s)
    return (s - s.mean()) / std


def scale_unit(s) -> np.ndarray:
    """Min-max scale to ``[0, 1]``; a constant series maps to 0.5."""
    s = as_series(s)
    lo, hi = s.min(), s.max()
    if hi == lo:
        return np.full_like(s, 0.5)
    out = (s - lo) / (hi - lo)
    # guard against 1 + eps from rounding
    return np.clip(out, 0.0, 1.0)


def quantile_edges(s, a: int) -> BinEdges:
    """Empirical quantiles at ``k/a`` (k = 1..a-1), linearly interpolated."""
    s = as_series(s)
    if a < 2:
        raise ValueError("bin count must be >= 2")
    probs = np.arange(1, a) / a
    edges = np.quantile(s, probs, method="linear")
    # interpolation round-off can break monotonicity on duplicated values
    edges = np.maximum.accumulate(edges)
    return BinEdges(edges, a)


def uniform_edges(a: int, lo: float = 0.0, hi: float = 1.0) -> BinEdges:
    """Equal-width cut points over ``[lo, hi]``."""
    if a < 2:
        raise ValueError("bin count must be >= 2")
    return BinEdges(np.linspace(lo, hi, a + 1)[1:-1], a)


def bin_index(s, edges: BinEdges) -> np.ndarray:
    """Bin number of every value; a value equal to an edge takes the lower bin."""
    s = as_series(s)
    return np.searchsorted(edges.edges, s, side="left")


def histogram(s, edges: BinEdges) -> Histogram:
    idx = bin_index(s, edges)
    return Histogram(np.bincount(idx, minlength=edges.bin_count).astype(np.int64))
