"""Dataset loading, 1NN classification, bag-of-patterns and report assembly."""
from __future__ import annotations

import csv
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import as_series, scale_unit, znormalize
from .correlation import correlogram
from .entropy import pe_profile, profile_rows
from .metrics import (SMOOTHING, MetricsRecord, iec_for_representation,
                      mean_record)
from .symbolic import (SaxConfig, gaussian_breakpoints, paa, reconstruct_paa,
                       reconstruct_sax, sax, sax_word, word_to_letters)

# dataset -> (n, w, a), best SAX-BoP settings on the UCR benchmarks
BENCHMARK_PARAMS = {
    "ecg": (96, 12, 7),
    "lighting2": (637, 18, 7),
    "coffee": (286, 48, 7),
    "adiac": (176, 25, 9),
    "lighting7": (319, 11, 9),
    "beef": (470, 11, 5),
    "oliveoil": (570, 26, 7),
}
_ALIASES = {"ecg200": "ecg", "lightning2": "lighting2", "lightning7": "lighting7"}

THREADS_ENV = "SAXLAB_THREADS"


def benchmark_key(name: str) -> str | None:
    key = re.sub(r"[^a-z0-9]", "", name.lower())
    key = re.sub(r"(train|test)$", "", key)
    key = _ALIASES.get(key, key)
    return key if key in BENCHMARK_PARAMS else None


def benchmark_config(name: str) -> SaxConfig | None:
    key = benchmark_key(name)
    return SaxConfig(*BENCHMARK_PARAMS[key]) if key else None


@dataclass
class Dataset:
    samples: np.ndarray
    labels: list
    name: str = "dataset"

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 2:
            raise ValueError("samples must form a 2-d array of equal-length series")
        if len(self.labels) != self.samples.shape[0]:
            raise ValueError(
                f"{len(self.labels)} labels for {self.samples.shape[0]} samples")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples contain non-finite values")

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def length(self) -> int:
        return self.samples.shape[1]


def _parse_label(token: str):
    try:
        v = float(token)
    except ValueError:
        return token
    return int(v) if v.is_integer() else v


def _split(line: str) -> list[str]:
    if "," in line:
        return [t.strip() for t in line.split(",")]
    if "\t" in line:
        return [t.strip() for t in line.split("\t")]
    return line.split()


def load_dataset(path, name: str | None = None) -> Dataset:
    """Read UCR-style rows ``label, v1, ..., vn``.

    The delimiter (comma, tab, or whitespace) is detected per line.  Blank
    lines are skipped.  Ragged or non-numeric rows raise ``ValueError``
    naming the 1-based row number.
    """
    path = Path(path)
    labels, rows = [], []
    with path.open() as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            tokens = _split(line.strip())
            if len(tokens) < 2:
                raise ValueError(f"{path}: row {lineno} has no values")
            try:
                values = [float(t) for t in tokens[1:]]
            except ValueError as exc:
                raise ValueError(f"{path}: row {lineno}: {exc}") from None
            if rows and len(values) != len(rows[0]):
                raise ValueError(
                    f"{path}: row {lineno} has {len(values)} values, "
                    f"expected {len(rows[0])}")
            labels.append(_parse_label(tokens[0]))
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return Dataset(np.array(rows), labels, name or path.stem)


def save_dataset(ds: Dataset, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for label, row in zip(ds.labels, ds.samples):
            writer.writerow([label, *(repr(float(v)) for v in row)])


def _check_pair(train: Dataset, test: Dataset) -> None:
    if len(train) == 0:
        raise ValueError("training set is empty")
    if train.length != test.length:
        raise ValueError(
            f"series length mismatch: train {train.length}, test {test.length}")


def _nearest(train_x: np.ndarray, test_x: np.ndarray) -> np.ndarray:
    # argmin returns the first (lowest-index) minimum on ties
    out = np.empty(len(test_x), dtype=np.int64)
    for i, row in enumerate(test_x):
        out[i] = np.argmin(np.sum((train_x - row) ** 2, axis=1))
    return out


def _error_rate(train_labels, test_labels, idx) -> float:
    wrong = sum(train_labels[j] != y for j, y in zip(idx, test_labels))
    return wrong / len(test_labels) if len(test_labels) else 0.0


def nn1_euclidean(train: Dataset, test: Dataset) -> float:
    """Error rate of 1NN under Euclidean distance; ties go to the lowest
    training index."""
    _check_pair(train, test)
    idx = _nearest(train.samples, test.samples)
    return _error_rate(train.labels, test.labels, idx)


@dataclass
class BopHistogram:
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def vocabulary(self) -> dict[str, int]:
        return {word: i for i, word in enumerate(sorted(self.counts))}


def default_subwindow(n: int) -> int:
    return max(1, int(round(n / 4)))


def sax_bop(s, cfg: SaxConfig, subwindow: int,
            numerosity_reduction: bool = True) -> BopHistogram:
    """Bag of SAX words over stride-1 sliding subwindows.

    Each subwindow is z-normalized on its own.  With numerosity reduction a
    run of identical consecutive words is counted once.
    """
    s = as_series(s)
    if not 1 <= subwindow <= s.size:
        raise ValueError(f"subwindow must be in [1, {s.size}], got {subwindow}")
    if cfg.w > subwindow:
        raise ValueError(f"word number {cfg.w} exceeds subwindow {subwindow}")
    cuts = gaussian_breakpoints(cfg.a)
    windows = np.lib.stride_tricks.sliding_window_view(s, subwindow)
    hist = BopHistogram()
    previous = None
    for win in windows:
        word = word_to_letters(sax_word(paa(znormalize(win), cfg.w), cuts).symbols)
        if numerosity_reduction and word == previous:
            continue
        hist.counts[word] = hist.counts.get(word, 0) + 1
        previous = word
    return hist


def bop_matrix(hists: list[BopHistogram]) -> tuple[np.ndarray, list[str]]:
    vocab = sorted(set().union(*(h.counts for h in hists)))
    index = {w: i for i, w in enumerate(vocab)}
    out = np.zeros((len(hists), len(vocab)))
    for r, h in enumerate(hists):
        for word, c in h.counts.items():
            out[r, index[word]] = c
    return out, vocab


def nn1_bop(train: Dataset, test: Dataset, cfg: SaxConfig,
            subwindow: int | None = None) -> float:
    """1NN error rate on bag-of-patterns histograms (absent words count 0)."""
    _check_pair(train, test)
    if subwindow is None:
        subwindow = default_subwindow(train.length)
    hists = [sax_bop(s, cfg, subwindow) for s in train.samples]
    hists += [sax_bop(s, cfg, subwindow) for s in test.samples]
    mat, _ = bop_matrix(hists)
    idx = _nearest(mat[: len(train)], mat[len(train):])
    return _error_rate(train.labels, test.labels, idx)


@dataclass(frozen=True)
class RegressionFit:
    b1: float
    b2: float
    r_squared: float
    n_points: int

    @property
    def multiple_r(self) -> float:
        return math.sqrt(max(self.r_squared, 0.0))

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        return self.b1 * x + self.b2 * x * x

    def to_dict(self) -> dict:
        return {"intercept": 0.0, "b1": self.b1, "b2": self.b2,
                "r_squared": self.r_squared, "multiple_r": self.multiple_r,
                "n_points": self.n_points}


def quad_regression_origin(xs, ys) -> RegressionFit:
    """Least-squares fit of ``y = b1*x + b2*x**2`` with no intercept.

    R-squared is the uncentered ``1 - SS_res / sum(y**2)``.

    Raises
    ------
    ValueError
        Fewer than 3 points, or a singular normal matrix (e.g. every x
        identical, which makes ``x`` and ``x**2`` collinear).
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-d and of equal length")
    if x.size < 3:
        raise ValueError("need at least 3 points")
    s2, s3, s4 = (x ** 2).sum(), (x ** 3).sum(), (x ** 4).sum()
    t1, t2 = (x * y).sum(), (x ** 2 * y).sum()
    det = s2 * s4 - s3 * s3
    if s2 == 0.0 or abs(det) <= 1e-10 * s2 * s4:
        raise ValueError("singular normal matrix: x and x^2 are collinear")
    b1 = (s4 * t1 - s3 * t2) / det
    b2 = (s2 * t2 - s3 * t1) / det
    resid = y - (b1 * x + b2 * x * x)
    syy = (y ** 2).sum()
    r2 = 1.0 - (resid @ resid) / syy if syy > 0 else 1.0
    return RegressionFit(float(b1), float(b2), float(r2), int(x.size))


def load_pairs(path, include_all: bool = False) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Read regression pairs from CSV.

    Accepts either ``x,y`` columns or the error-table layout with
    ``sax_iec, err_sax, err_raw`` (y is the error ratio).  An optional
    ``benchmark`` column marks rows used by default.
    """
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no rows")
    cols = set(rows[0])
    xs, ys, names = [], [], []
    for i, row in enumerate(rows, 2):
        flag = row.get("benchmark", "true").strip().lower()
        if not include_all and flag in ("false", "0", "no"):
            continue
        try:
            if {"x", "y"} <= cols:
                x, y = float(row["x"]), float(row["y"])
            elif {"sax_iec", "err_sax", "err_raw"} <= cols:
                x = float(row["sax_iec"])
                y = float(row["err_sax"]) / float(row["err_raw"])
            else:
                raise ValueError(f"unrecognised columns {sorted(cols)}")
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{path}: row {i}: {exc}") from None
        xs.append(x)
        ys.append(y)
        names.append(row.get("dataset", str(i - 1)))
    return np.array(xs), np.array(ys), names


def table2_path() -> Path:
    return Path(__file__).with_name("data") / "table2.csv"


@dataclass
class AnalysisOptions:
    binning: str = "quantile"
    max_lag: int | None = None
    include_lag0: bool = False
    orders: tuple = ()
    delays: tuple = ()
    subwindow: int | None = None
    threads: int | None = None


def thread_count(requested: int | None = None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get(THREADS_ENV)
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def analyze_sample(s, cfg: SaxConfig, opts: AnalysisOptions) -> dict:
    s = as_series(s)
    p, word = sax(s, cfg.w, cfg.a)
    sax_recon = reconstruct_sax(word, s.size)
    paa_recon = reconstruct_paa(p)
    out = {
        "word": word_to_letters(word.symbols),
        "paa": [float(v) for v in p.means],
        "sax_metrics": iec_for_representation(s, sax_recon, cfg.a, opts.binning).to_dict(),
        "paa_metrics": iec_for_representation(s, paa_recon, cfg.a, opts.binning).to_dict(),
    }
    corr = {}
    for label, series in (("raw", scale_unit(s)), ("sax", scale_unit(sax_recon)),
                          ("paa", scale_unit(paa_recon))):
        corr[label] = correlogram(series, opts.max_lag, opts.include_lag0).to_dict()
    out["correlogram"] = corr
    if opts.orders and opts.delays:
        out["pe_raw"] = profile_rows(pe_profile(s, opts.orders, opts.delays))
        out["pe_sax"] = profile_rows(pe_profile(word.symbols.astype(float),
                                                opts.orders, opts.delays))
    return out


def _mean(values) -> float | None:
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


def analyze_dataset(ds: Dataset, cfg: SaxConfig | None = None,
                    options: AnalysisOptions | None = None,
                    test: Dataset | None = None) -> dict:
    """Full per-sample and aggregate report for one dataset.

    When ``cfg`` is omitted the benchmark parameter table is consulted by
    dataset name.  Error rates and the error ratio are filled in only when
    a ``test`` split is given.
    """
    opts = options or AnalysisOptions()
    if cfg is None:
        cfg = benchmark_config(ds.name)
        if cfg is None:
            raise ValueError(
                f"no SAX parameters given and {ds.name!r} is not a known benchmark")
    if cfg.n != ds.length:
        cfg = SaxConfig(ds.length, cfg.w, cfg.a)
    max_lag = opts.max_lag
    threads = thread_count(opts.threads)
    work = lambda s: analyze_sample(s, cfg, opts)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            per_sample = list(pool.map(work, ds.samples))
    else:
        per_sample = [work(s) for s in ds.samples]
    for i, (label, rec) in enumerate(zip(ds.labels, per_sample)):
        rec["index"] = i
        rec["label"] = label

    def mean_metrics(key):
        return mean_record(MetricsRecord(**r[key]) for r in per_sample).to_dict()

    aggregates = {
        "n_samples": len(ds),
        "sax_mean": mean_metrics("sax_metrics"),
        "paa_mean": mean_metrics("paa_metrics"),
        "abs_mean_acf": {
            rep: _mean(r["correlogram"][rep]["abs_mean_acf"] for r in per_sample)
            for rep in ("raw", "sax", "paa")
        },
        "degenerate_correlograms": {
            rep: sum(r["correlogram"][rep]["degenerate"] for r in per_sample)
            for rep in ("raw", "sax", "paa")
        },
    }
    regression = None
    subwindow = opts.subwindow or default_subwindow(ds.length)
    if test is not None:
        err_raw = nn1_euclidean(ds, test)
        err_sax = nn1_bop(ds, test, cfg, subwindow)
        aggregates["error_rate_raw"] = err_raw
        aggregates["error_rate_sax"] = err_sax
        ratio = err_sax / err_raw if err_raw > 0 else None
        aggregates["error_ratio"] = ratio
        regression = {"sax_iec": aggregates["sax_mean"]["iec"],
                      "paa_iec": aggregates["paa_mean"]["iec"],
                      "err_sax": err_sax, "err_raw": err_raw,
                      "error_ratio": ratio}
    config = {
        "version": __version__,
        "dataset": ds.name,
        "n": cfg.n, "w": cfg.w, "a": cfg.a,
        "binning": opts.binning,
        "smoothing": SMOOTHING,
        "log_base": "e",
        "max_lag": max_lag,
        "include_lag0": opts.include_lag0,
        "orders": list(opts.orders),
        "delays": list(opts.delays),
        "subwindow": subwindow,
        "numerosity_reduction": True,
        "test_split": test.name if test is not None else None,
    }
    return {"config": config, "per_sample": per_sample,
            "aggregates": aggregates, "regression": regression}
