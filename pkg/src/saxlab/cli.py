"""Command-line entry point: ``saxlab <command> [options]``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .core import scale_unit
from .correlation import correlogram
from .entropy import pe_profile, profile_rows
from .evaluate import (AnalysisOptions, Dataset, analyze_dataset,
                       benchmark_config, default_subwindow, load_dataset,
                       load_pairs, nn1_bop, nn1_euclidean,
                       quad_regression_origin, save_dataset, table2_path)
from .metrics import SMOOTHING, iec_for_representation, mean_record
from .symbolic import (SaxConfig, reconstruct_paa, reconstruct_sax, sax,
                       word_to_letters)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_IO = 4

EPILOG = """\
exit codes:
  0  success
  2  unknown command or invalid flags
  3  invalid input data or parameters
  4  file read/write failure

environment:
  SAXLAB_THREADS  cap on worker threads for per-sample analysis
"""


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"2..7"`` -> [2..7]; ``"1,3,5"`` -> [1, 3, 5]; mixed forms allowed."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    return sorted(set(out))


def _range_arg(text: str) -> list[int]:
    try:
        return parse_range(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}") from None


# ---------------------------------------------------------------- output


def _clean(obj):
    """Make numpy scalars and arrays JSON-serializable; NaN becomes null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    if isinstance(obj, float) and obj != obj:
        return None
    return obj


def render_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else v)
                             for k, v in _clean(row).items()})
    return buf.getvalue()


def write_atomic(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, payload: dict, rows: list[dict]) -> None:
    text = render_csv(rows) if args.format == "csv" else render_json(payload)
    write_atomic(args.output, text)


# ---------------------------------------------------------------- helpers


def _dataset(args) -> Dataset:
    if not args.input:
        raise UsageError("--input is required")
    return load_dataset(args.input)


def _config(args, ds: Dataset) -> SaxConfig:
    base = benchmark_config(ds.name)
    w = args.w if args.w is not None else (base.w if base else None)
    a = args.a if args.a is not None else (base.a if base else None)
    if w is None or a is None:
        raise UsageError(
            f"--w and --a are required ({ds.name!r} is not a known benchmark)")
    return SaxConfig(ds.length, w, a)


def _resolved(args, cfg: SaxConfig | None = None, **extra) -> dict:
    out = {"version": __version__, "command": args.command}
    if getattr(args, "input", None):
        out["input"] = args.input
    if cfg is not None:
        out.update(n=cfg.n, w=cfg.w, a=cfg.a)
    out.update(extra)
    return out


# ---------------------------------------------------------------- commands


def cmd_symbolize(args) -> None:
    ds = _dataset(args)
    cfg = _config(args, ds)
    samples = []
    for i, (label, s) in enumerate(zip(ds.labels, ds.samples)):
        p, word = sax(s, cfg.w, cfg.a)
        samples.append({"index": i, "label": label,
                        "word": word_to_letters(word.symbols),
                        "paa": p.means})
    rows = [{"index": r["index"], "label": r["label"], "word": r["word"]}
            for r in samples]
    emit(args, {"config": _resolved(args, cfg), "samples": samples}, rows)


def cmd_metrics(args) -> None:
    ds = _dataset(args)
    cfg = _config(args, ds)
    samples, rows = [], []
    sax_recs, paa_recs = [], []
    for i, (label, s) in enumerate(zip(ds.labels, ds.samples)):
        p, word = sax(s, cfg.w, cfg.a)
        rec_sax = iec_for_representation(s, reconstruct_sax(word, s.size), cfg.a,
                                         args.binning)
        rec_paa = iec_for_representation(s, reconstruct_paa(p), cfg.a, args.binning)
        sax_recs.append(rec_sax)
        paa_recs.append(rec_paa)
        samples.append({"index": i, "label": label,
                        "word": word_to_letters(word.symbols),
                        "sax": rec_sax.to_dict(), "paa": rec_paa.to_dict()})
        for rep, rec in (("sax", rec_sax), ("paa", rec_paa)):
            rows.append({"index": i, "label": label, "representation": rep,
                         **rec.to_dict()})
    payload = {
        "config": _resolved(args, cfg, binning=args.binning, smoothing=SMOOTHING),
        "samples": samples,
        "aggregates": {"sax_mean": mean_record(sax_recs).to_dict(),
                       "paa_mean": mean_record(paa_recs).to_dict()},
    }
    emit(args, payload, rows)


def _pe_series(args, ds: Dataset):
    if args.on == "raw":
        return ds.samples, None
    cfg = _config(args, ds)
    return [sax(s, cfg.w, cfg.a)[1].symbols.astype(float) for s in ds.samples], cfg


def cmd_pe(args) -> None:
    ds = _dataset(args)
    series, cfg = _pe_series(args, ds)
    samples, rows = [], []
    for i, s in enumerate(series):
        grid = profile_rows(pe_profile(s, args.orders, args.delays))
        samples.append({"index": i, "label": ds.labels[i], "grid": grid})
        rows.extend({"index": i, **cell} for cell in grid)
    # dataset mean per cell, over samples where the cell is defined
    mean_grid = []
    for j, cell in enumerate(samples[0]["grid"] if samples else []):
        vals = [s["grid"][j]["value"] for s in samples
                if s["grid"][j]["value"] is not None]
        mean_grid.append({"n": cell["n"], "t": cell["t"],
                          "value": float(np.mean(vals)) if vals else None})
    payload = {"config": _resolved(args, cfg, on=args.on, orders=args.orders,
                                   delays=args.delays),
               "samples": samples, "mean_grid": mean_grid}
    emit(args, payload, rows)


def cmd_acf(args) -> None:
    ds = _dataset(args)
    cfg = _config(args, ds)
    samples, rows = [], []
    summary = {"raw": [], "sax": [], "paa": []}
    for i, (label, s) in enumerate(zip(ds.labels, ds.samples)):
        p, word = sax(s, cfg.w, cfg.a)
        reps = {"raw": scale_unit(s),
                "sax": scale_unit(reconstruct_sax(word, s.size)),
                "paa": scale_unit(reconstruct_paa(p))}
        entry = {"index": i, "label": label}
        for rep, series in reps.items():
            res = correlogram(series, args.max_lag, args.include_lag0)
            entry[rep] = res.to_dict()
            if res.abs_mean_acf is not None:
                summary[rep].append(res.abs_mean_acf)
            for row in res.rows():
                rows.append({"index": i, "representation": rep, **row,
                             "band": res.band})
        samples.append(entry)
    aggregates = {rep: (float(np.mean(v)) if v else None) for rep, v in summary.items()}
    payload = {"config": _resolved(args, cfg, max_lag=args.max_lag,
                                   include_lag0=args.include_lag0),
               "samples": samples, "abs_mean_acf": aggregates}
    emit(args, payload, rows)


def cmd_evaluate(args) -> None:
    ds = _dataset(args)
    cfg = _config(args, ds)
    test = load_dataset(args.test) if args.test else None
    opts = AnalysisOptions(binning=args.binning, max_lag=args.max_lag,
                           include_lag0=args.include_lag0,
                           orders=tuple(args.orders or ()),
                           delays=tuple(args.delays or ()),
                           subwindow=args.subwindow)
    report = analyze_dataset(ds, cfg, opts, test)
    report["config"]["input"] = args.input
    report["config"]["test"] = args.test
    rows = [{"index": r["index"], "label": r["label"], "word": r["word"],
             **{f"sax_{k}": v for k, v in r["sax_metrics"].items()},
             **{f"paa_{k}": v for k, v in r["paa_metrics"].items()},
             **{f"abs_mean_acf_{rep}": r["correlogram"][rep]["abs_mean_acf"]
                for rep in ("raw", "sax", "paa")}}
            for r in report["per_sample"]]
    emit(args, report, rows)


def _report_pairs(paths):
    xs, ys, names = [], [], []
    for path in paths:
        with open(path) as fh:
            report = json.load(fh)
        reg = report.get("regression") or {}
        if reg.get("error_ratio") is None:
            raise ValueError(f"{path}: report has no error ratio (run evaluate with --test)")
        xs.append(reg["sax_iec"])
        ys.append(reg["error_ratio"])
        names.append(report["config"].get("dataset", path))
    return np.array(xs), np.array(ys), names


def cmd_regress(args) -> None:
    if args.reports:
        xs, ys, names = _report_pairs(args.reports)
        source = list(args.reports)
    else:
        path = args.pairs or str(table2_path())
        xs, ys, names = load_pairs(path, include_all=args.all_rows)
        source = path
    fit = quad_regression_origin(xs, ys)
    pred = fit.predict(xs)
    points = [{"dataset": n, "x": x, "y": y, "fitted": f}
              for n, x, y, f in zip(names, xs, ys, pred)]
    payload = {"config": {"version": __version__, "command": "regress",
                          "source": source, "all_rows": args.all_rows,
                          "model": "y = b1*x + b2*x^2"},
               "fit": fit.to_dict(), "points": points}
    emit(args, payload, [fit.to_dict()])


def cmd_sweep(args) -> None:
    train = _dataset(args)
    if not args.test:
        raise UsageError("sweep needs --test")
    test = load_dataset(args.test)
    subs = args.subwindows or [args.subwindow or default_subwindow(train.length)]
    err_raw = nn1_euclidean(train, test)
    rows = []
    for sub in subs:
        for w in args.w_grid:
            for a in args.a_grid:
                if w > sub:
                    continue
                cfg = SaxConfig(train.length, w, a)
                rows.append({"subwindow": sub, "w": w, "a": a,
                             "error_rate": nn1_bop(train, test, cfg, sub)})
    rows.sort(key=lambda r: (r["error_rate"], r["subwindow"], r["w"], r["a"]))
    top = rows[: args.top]
    payload = {"config": _resolved(args, None, test=args.test, w_grid=args.w_grid,
                                   a_grid=args.a_grid, subwindows=subs),
               "error_rate_raw": err_raw, "results": rows,
               "top": top,
               "top_mean": ({"w": float(np.mean([r["w"] for r in top])),
                             "a": float(np.mean([r["a"] for r in top]))}
                            if top else None)}
    emit(args, payload, rows)


def generate(kind: str, samples: int, length: int, seed: int) -> Dataset:
    """Seeded synthetic datasets for smoke tests and demonstrations."""
    rng = np.random.default_rng(seed)
    t = np.arange(length)
    labels = [1 + (i % 2) for i in range(samples)]
    if kind == "noise":
        data = rng.standard_normal((samples, length))
    elif kind == "ar1":
        eps = rng.standard_normal((samples, length))
        data = np.empty_like(eps)
        data[:, 0] = eps[:, 0]
        for k in range(1, length):
            data[:, k] = 0.7 * data[:, k - 1] + eps[:, k]
    elif kind == "sine":
        data = np.sin(2 * np.pi * t / 50)[None, :] + 0.1 * rng.standard_normal((samples, length))
    elif kind == "blobs":
        centers = np.where(np.array(labels)[:, None] == 1, -3.0, 3.0)
        data = centers + 0.3 * rng.standard_normal((samples, length))
    elif kind == "motifs":
        period = max(4, length // 8)
        phase = (t % period) / period
        motif = {1: phase, 2: 1.0 - phase}
        data = np.array([motif[y] for y in labels]) + 0.05 * rng.standard_normal((samples, length))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return Dataset(data, labels, kind)


def cmd_generate(args) -> None:
    ds = generate(args.kind, args.samples, args.length, args.seed)
    if args.output in (None, "-"):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for label, row in zip(ds.labels, ds.samples):
            w.writerow([label, *(repr(float(v)) for v in row)])
        sys.stdout.write(buf.getvalue())
    else:
        target = Path(args.output)
        fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
        os.close(fd)
        save_dataset(ds, tmp)
        os.replace(tmp, target)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="saxlab",
        description="SAX/PAA symbolization and statistical evaluation.",
        epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p, sax_flags=True):
        p.add_argument("--input", help="UCR-style rows: label, v1, ..., vn")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for stochastic steps (default 0)")
        if sax_flags:
            p.add_argument("--w", type=int, help="word number")
            p.add_argument("--a", type=int, help="alphabet size (2..26)")

    def corr_flags(p):
        p.add_argument("--max-lag", type=int, default=None,
                       help="default min(n-2, 10*log10(n))")
        p.add_argument("--include-lag0", action="store_true",
                       help="include lag 0 in the absolute-mean ACF")

    def kw(name, text):
        return sub.add_parser(name, help=text, description=text, epilog=EPILOG,
                              formatter_class=argparse.RawDescriptionHelpFormatter)

    p = kw("symbolize", "SAX words and PAA values per sample")
    common(p)
    p.set_defaults(func=cmd_symbolize)

    p = kw("metrics", "information loss, KL divergence and IEC for SAX and PAA")
    common(p)
    p.add_argument("--binning", choices=("quantile", "uniform"), default="quantile")
    p.set_defaults(func=cmd_metrics)

    p = kw("pe", "permutation-entropy grid per sample (long format)")
    common(p)
    p.add_argument("--orders", type=_range_arg, default=parse_range("2..7"))
    p.add_argument("--delays", type=_range_arg, default=parse_range("1..10"))
    p.add_argument("--on", choices=("raw", "sax"), default="raw",
                   help="compute on raw values or on SAX symbol indices")
    p.set_defaults(func=cmd_pe)

    p = kw("acf", "ACF/PACF correlograms for raw, SAX and PAA")
    common(p)
    corr_flags(p)
    p.set_defaults(func=cmd_acf)

    p = kw("evaluate", "full dataset report, with 1NN error rates given --test")
    common(p)
    corr_flags(p)
    p.add_argument("--test", help="test split for 1NN evaluation")
    p.add_argument("--binning", choices=("quantile", "uniform"), default="quantile")
    p.add_argument("--subwindow", type=int, help="BoP subwindow (default n/4)")
    p.add_argument("--orders", type=_range_arg, default=None)
    p.add_argument("--delays", type=_range_arg, default=None)
    p.set_defaults(func=cmd_evaluate)

    p = kw("regress", "through-origin quadratic fit of error ratio on SAX IEC")
    p.add_argument("--pairs", help="CSV with x,y or sax_iec,err_sax,err_raw "
                                   "(default: bundled error table)")
    p.add_argument("--reports", nargs="+", help="evaluate JSON reports instead of --pairs")
    p.add_argument("--all-rows", action="store_true",
                   help="also fit rows flagged benchmark=false")
    p.add_argument("--output")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_regress)

    p = kw("sweep", "grid of BoP 1NN error rates over w, a and subwindow")
    common(p, sax_flags=False)
    p.add_argument("--test")
    p.add_argument("--w-grid", type=_range_arg, default=parse_range("4..16"))
    p.add_argument("--a-grid", type=_range_arg, default=parse_range("3..9"))
    p.add_argument("--subwindow", type=int)
    p.add_argument("--subwindows", type=_range_arg)
    p.add_argument("--top", type=int, default=10)
    p.set_defaults(func=cmd_sweep)

    p = kw("generate", "write a seeded synthetic dataset in UCR row format")
    p.add_argument("--kind", choices=("noise", "ar1", "sine", "blobs", "motifs"),
                   default="noise")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--length", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_generate)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        print("saxlab: error: a command is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args)
    except UsageError as exc:
        print(f"saxlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"saxlab {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"saxlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
