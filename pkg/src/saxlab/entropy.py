"""Normalized permutation entropy with tie-sharing rank patterns."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import as_series
from .symbolic import SaxWord

MIN_ORDER = 2
MAX_ORDER = 7


@dataclass(frozen=True)
class PermutationSpec:
    order: int
    delay: int = 1

    def __post_init__(self):
        if not MIN_ORDER <= self.order <= MAX_ORDER:
            raise ValueError(
                f"order must be in [{MIN_ORDER}, {MAX_ORDER}], got {self.order}")
        if self.delay < 1:
            raise ValueError(f"delay must be >= 1, got {self.delay}")

    def span(self) -> int:
        """Samples covered by one embedding window."""
        return (self.order - 1) * self.delay + 1


@dataclass(frozen=True)
class PePoint:
    spec: PermutationSpec
    value: float
    entropy: float
    windows: int
    reliable: bool


def rank_pattern(window) -> np.ndarray:
    """Dense ranks: each value becomes the number of distinct smaller values.

    >>> rank_pattern([3, 4, 4, 3, 1]).tolist()
    [1, 2, 2, 1, 0]
    """
    _, inverse = np.unique(np.asarray(window), return_inverse=True)
    return inverse.reshape(-1).astype(np.int64)


def _dense_ranks(windows: np.ndarray) -> np.ndarray:
    """Row-wise ``rank_pattern`` for a 2-d array of windows."""
    order = np.argsort(windows, axis=1, kind="stable")
    sorted_vals = np.take_along_axis(windows, order, axis=1)
    steps = np.zeros(windows.shape, dtype=np.int64)
    steps[:, 1:] = sorted_vals[:, 1:] != sorted_vals[:, :-1]
    sorted_ranks = np.cumsum(steps, axis=1)
    ranks = np.empty_like(sorted_ranks)
    np.put_along_axis(ranks, order, sorted_ranks, axis=1)
    return ranks


def embed(s: np.ndarray, spec: PermutationSpec) -> np.ndarray:
    """Delay-embedding matrix; row i is ``s[i], s[i+t], ..., s[i+(n-1)t]``."""
    count = s.size - (spec.order - 1) * spec.delay
    if count < 1:
        raise ValueError(
            f"series of length {s.size} too short for order {spec.order}, "
            f"delay {spec.delay}")
    idx = np.arange(count)[:, None] + spec.delay * np.arange(spec.order)
    return s[idx]


def pattern_counts(s, spec: PermutationSpec) -> np.ndarray:
    """Occurrence counts of every observed rank pattern (order unspecified)."""
    windows = embed(as_series(s), spec)
    ranks = _dense_ranks(windows)
    codes = ranks @ (spec.order ** np.arange(spec.order))
    _, counts = np.unique(codes, return_counts=True)
    return counts


def permutation_entropy(s, spec: PermutationSpec) -> PePoint:
    """Shannon entropy of rank patterns, normalized by ``ln(n!)``.

    ``entropy`` holds the raw value in nats.  Because tied patterns enlarge
    the pattern space beyond ``n!``, the normalized value is clamped to
    ``[0, 1]``.  ``reliable`` is true when the window count exceeds
    ``5 * n!``.
    """
    counts = pattern_counts(s, spec)
    total = int(counts.sum())
    p = counts / total
    h = float(-np.sum(p * np.log(p)))
    norm = math.log(math.factorial(spec.order))
    value = min(max(h / norm, 0.0), 1.0)
    return PePoint(spec, value, h, total, total > 5 * math.factorial(spec.order))


def pe_on_sax(word: SaxWord, spec: PermutationSpec) -> PePoint:
    return permutation_entropy(np.asarray(word.symbols, dtype=float), spec)


def pe_profile(s, orders, delays) -> dict[tuple[int, int], PePoint | None]:
    """PE over the ``orders x delays`` grid.

    Cells where the series is too short are present with value ``None``.
    """
    s = as_series(s)
    grid: dict[tuple[int, int], PePoint | None] = {}
    for n in sorted(set(orders)):
        for t in sorted(set(delays)):
            spec = PermutationSpec(n, t)
            grid[(n, t)] = (permutation_entropy(s, spec)
                            if s.size >= spec.span() else None)
    return grid


def profile_rows(grid) -> list[dict]:
    """Long-format rows (n, t, value, entropy, reliable) for plotting."""
    rows = []
    for (n, t), point in grid.items():
        if point is None:
            rows.append({"n": n, "t": t, "value": None, "entropy": None,
                         "reliable": None})
        else:
            rows.append({"n": n, "t": t, "value": point.value,
                         "entropy": point.entropy, "reliable": point.reliable})
    return rows
