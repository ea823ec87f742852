"""Reconstruction information loss, smoothed KL divergence and the IEC score.

IEC (information embedding cost) combines a standardized KL divergence
between quantile-bin histograms of the original and reconstructed signals
with a standardized reconstruction MSE::

    iec = kl_std / (1 + info_loss_std)

Standardization: ``kl_std = min(kl / ln(a), 1)`` and
``info_loss_std = min(info_loss, 1)``.  Both signals are min-max scaled to
``[0, 1]`` before anything is measured.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import (Histogram, as_series, histogram, quantile_edges,
                   scale_unit, uniform_edges)

BINNING_MODES = ("quantile", "uniform")
SMOOTHING = "add-one"


@dataclass(frozen=True)
class MetricsRecord:
    info_loss: float
    kl: float
    info_loss_std: float
    kl_std: float
    iec: float

    def to_dict(self) -> dict:
        return asdict(self)


def info_loss(recon, orig) -> float:
    """Sum of squared index-aligned differences divided by ``n - 1``."""
    recon = as_series(recon, "recon")
    orig = as_series(orig, "orig")
    if recon.size != orig.size:
        raise ValueError(f"length mismatch: {recon.size} != {orig.size}")
    if orig.size < 2:
        raise ValueError("information loss needs at least 2 samples")
    diff = recon - orig
    return float(diff @ diff / (orig.size - 1))


def _counts(h) -> np.ndarray:
    return np.asarray(h.counts if isinstance(h, Histogram) else h, dtype=float)


def kl_divergence(p_counts, q_counts) -> float:
    """KL(P || Q) in nats after add-one smoothing of both count vectors."""
    p = _counts(p_counts)
    q = _counts(q_counts)
    if p.shape != q.shape:
        raise ValueError(f"bin count mismatch: {p.size} != {q.size}")
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("histogram counts must be non-negative")
    p = (p + 1.0) / (p.sum() + p.size)
    q = (q + 1.0) / (q.sum() + q.size)
    # terms are >= 0 overall by Gibbs' inequality; clamp round-off only
    return max(float(np.sum(p * np.log(p / q))), 0.0)


def iec(kl_std: float, info_loss_std: float) -> float:
    for name, v in (("kl_std", kl_std), ("info_loss_std", info_loss_std)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v}")
    return kl_std / (1.0 + info_loss_std)


def standardize_kl(kl: float, a: int) -> float:
    return min(kl / math.log(a), 1.0)


def standardize_info_loss(loss: float) -> float:
    return min(loss, 1.0)


def iec_for_representation(orig, recon, a: int,
                           binning: str = "quantile") -> MetricsRecord:
    """Score one reconstructed representation against its original.

    Parameters
    ----------
    orig, recon : array_like
        Original series and its reconstruction at the same length.  Any
        affine scale is removed by min-max scaling.
    a : int
        Number of histogram bins (the alphabet size).
    binning : {"quantile", "uniform"}
        ``quantile`` places the edges at the quantiles of the scaled
        original; ``uniform`` uses equal-width bins over ``[0, 1]``.
    """
    if binning not in BINNING_MODES:
        raise ValueError(f"unknown binning mode {binning!r}")
    if a < 2:
        raise ValueError("alphabet size must be >= 2")
    orig_s = scale_unit(orig)
    recon_s = scale_unit(recon)
    if orig_s.size != recon_s.size:
        raise ValueError(f"length mismatch: {recon_s.size} != {orig_s.size}")
    edges = quantile_edges(orig_s, a) if binning == "quantile" else uniform_edges(a)
    kl = kl_divergence(histogram(orig_s, edges), histogram(recon_s, edges))
    loss = info_loss(recon_s, orig_s)
    kl_std = standardize_kl(kl, a)
    loss_std = standardize_info_loss(loss)
    return MetricsRecord(loss, kl, loss_std, kl_std, iec(kl_std, loss_std))


def mean_record(records) -> MetricsRecord:
    """Field-wise mean over samples."""
    records = list(records)
    if not records:
        raise ValueError("no records to average")
    arr = np.array([[r.info_loss, r.kl, r.info_loss_std, r.kl_std, r.iec]
                    for r in records])
    return MetricsRecord(*(float(v) for v in arr.mean(axis=0)))
