"""Sample ACF, Durbin-Levinson PACF and the absolute-mean-ACF summary."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import as_series


class DegenerateSeriesError(ValueError):
    """Autocorrelation is undefined for a constant series."""


@dataclass
class CorrelogramResult:
    lags: np.ndarray
    acf: np.ndarray
    pacf: np.ndarray
    abs_mean_acf: float | None
    band: float
    degenerate: bool = False
    singular_lags: list[int] = field(default_factory=list)

    def rows(self) -> list[dict]:
        return [{"lag": int(k), "acf": float(r), "pacf": _num(p)}
                for k, r, p in zip(self.lags, self.acf, self.pacf)]

    def to_dict(self) -> dict:
        return {
            "degenerate": self.degenerate,
            "abs_mean_acf": self.abs_mean_acf,
            "confidence_band": self.band,
            "singular_lags": list(self.singular_lags),
            "table": self.rows(),
        }


def _num(v):
    v = float(v)
    return None if math.isnan(v) else v


def default_max_lag(n: int) -> int:
    return max(1, min(n - 2, int(10 * math.log10(n))))


def _check(s, max_lag: int) -> np.ndarray:
    s = as_series(s)
    if s.size < 2:
        raise ValueError("autocorrelation needs at least 2 samples")
    if not 0 <= max_lag < s.size:
        raise ValueError(f"max_lag must be in [0, {s.size - 1}], got {max_lag}")
    return s


def acf(s, max_lag: int) -> np.ndarray:
    """Biased sample autocorrelation for lags ``0..max_lag``.

    Uses the full-series mean and the full sum of squares as denominator,
    which keeps the sequence positive semi-definite.

    Raises
    ------
    DegenerateSeriesError
        If the series is constant.
    """
    s = _check(s, max_lag)
    z = s - s.mean()
    denom = z @ z
    if denom == 0.0:
        raise DegenerateSeriesError("constant series has no autocorrelation")
    n = z.size
    out = np.array([z[: n - k] @ z[k:] for k in range(max_lag + 1)]) / denom
    out[0] = 1.0
    return out


def durbin_levinson(r: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Partial autocorrelations from an autocorrelation sequence ``r``.

    Returns the PACF (with ``pacf[0] = 1``) and the lags at which the
    recursion became singular; those lags and all later ones are NaN.
    """
    K = r.size - 1
    pacf = np.full(K + 1, np.nan)
    pacf[0] = 1.0
    singular: list[int] = []
    phi = np.zeros(0)
    v = 1.0
    for k in range(1, K + 1):
        if v <= 0.0:
            singular.extend(range(k, K + 1))
            break
        a = (r[k] - phi @ r[k - 1:0:-1]) / v
        if abs(a) > 1.0:
            singular.extend(range(k, K + 1))
            break
        pacf[k] = a
        phi = np.append(phi - a * phi[::-1], a)
        v *= 1.0 - a * a
    return pacf, singular


def pacf(s, max_lag: int) -> np.ndarray:
    s = as_series(s)
    if max_lag >= s.size / 2:
        raise ValueError(
            f"max_lag must be < length/2 = {s.size / 2}, got {max_lag}")
    return durbin_levinson(acf(s, max_lag))[0]


def abs_mean_acf(s, max_lag: int, include_lag0: bool = False) -> float:
    r = acf(s, max_lag)
    r = r if include_lag0 else r[1:]
    if r.size == 0:
        raise ValueError("no lags to average")
    return float(np.mean(np.abs(r)))


def correlogram(s, max_lag: int | None = None,
                include_lag0: bool = False) -> CorrelogramResult:
    """ACF, PACF and summary in one pass; constant input yields a
    ``degenerate`` result with empty tables instead of raising."""
    s = as_series(s)
    if max_lag is None:
        max_lag = default_max_lag(s.size)
    band = 1.96 / math.sqrt(s.size)
    try:
        r = acf(s, max_lag)
    except DegenerateSeriesError:
        empty = np.zeros(0)
        return CorrelogramResult(np.zeros(0, dtype=int), empty, empty, None,
                                 band, degenerate=True)
    # PACF is only estimated up to length/2
    pacf_lag = min(max_lag, (s.size - 1) // 2)
    p, singular = durbin_levinson(r[: pacf_lag + 1])
    full = np.full(max_lag + 1, np.nan)
    full[: p.size] = p
    summary = r if include_lag0 else r[1:]
    mean_abs = float(np.mean(np.abs(summary))) if summary.size else None
    return CorrelogramResult(np.arange(max_lag + 1), r, full, mean_abs, band,
                             singular_lags=singular)
