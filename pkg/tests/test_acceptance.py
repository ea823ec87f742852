"""Exit criteria, one test per criterion.

A summary line per criterion is printed at the end of the pytest run.
Criterion 8 needs the UCR archive; point ``SAXLAB_UCR_DIR`` at a directory
holding ``<Name>/<Name>_TRAIN[.tsv|.txt]`` files to enable it.
"""
import os
import time
from pathlib import Path

import numpy as np
import pytest

from oracles import ar1, naive_pe, padded_ls_pacf
from saxlab.cli import generate
from saxlab.entropy import PermutationSpec, permutation_entropy, rank_pattern
from saxlab.correlation import pacf
from saxlab.evaluate import (analyze_dataset, load_dataset,
                             load_pairs, nn1_bop, nn1_euclidean,
                             quad_regression_origin, table2_path)
from saxlab.metrics import iec, kl_divergence
from saxlab.symbolic import (SaxConfig, gaussian_breakpoints, paa,
                             reconstruct_paa, sax)


@pytest.fixture
def criterion(record_property):
    def tag(label):
        record_property("criterion", label)
    return tag


def test_c1_table3_regression(criterion):
    criterion("1. through-origin quadratic fit of error ratio on SAX IEC")
    start = time.perf_counter()
    xs, ys, names = load_pairs(table2_path())
    fit = quad_regression_origin(xs, ys)
    elapsed = time.perf_counter() - start
    assert len(names) == 7
    assert abs(fit.b1 - 9.454) <= 0.1
    assert abs(fit.b2 - (-14.98)) <= 0.15
    assert abs(fit.r_squared - 0.9266) <= 0.005
    assert elapsed < 1.0


def test_c2_iec_boundaries(criterion):
    criterion("2. IEC boundary values and monotonicity")
    start = time.perf_counter()
    for loss in (0, 0.5, 1):
        assert iec(0, loss) == 0
    assert iec(1, 1) == 0.5
    assert iec(1, 0) == 1
    rng = np.random.default_rng(2024)
    k = np.sort(rng.uniform(0, 1, 200))
    l = np.sort(rng.uniform(0, 1, 200))
    vals = np.array([[iec(a, b) for b in l] for a in k])
    assert np.all(np.diff(vals, axis=0) >= 0)
    assert np.all(np.diff(vals[k > 0], axis=1) <= 0)
    assert np.all((vals >= 0) & (vals <= 1))
    assert time.perf_counter() - start < 1.0


def test_c3_permutation_entropy(criterion):
    criterion("3. permutation entropy vs naive oracle, tie rule, bounds")
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 200:
        n = int(rng.integers(2, 5))
        t = int(rng.integers(1, 4))
        length = int(rng.integers((n - 1) * t + 1, 51))
        if checked % 2:
            s = rng.integers(0, 4, length).astype(float)  # tie-heavy
        else:
            s = rng.standard_normal(length)
        got = permutation_entropy(s, PermutationSpec(n, t))
        h, norm, _ = naive_pe(s, n, t)
        assert abs(got.entropy - h) <= 1e-12
        assert abs(got.value - norm) <= 1e-12
        checked += 1
    assert rank_pattern([3, 4, 4, 3, 1]).tolist() == [1, 2, 2, 1, 0]
    assert permutation_entropy(np.arange(100.0), PermutationSpec(3, 1)).value == 0
    noise = np.random.default_rng(33).random(10_000)
    assert permutation_entropy(noise, PermutationSpec(3, 1)).value >= 0.99


def test_c4_pacf(criterion):
    criterion("4. Durbin-Levinson PACF vs least-squares oracle; AR(1) cutoff")
    rng = np.random.default_rng(4)
    for _ in range(100):
        length = int(rng.integers(25, 501))
        k = int(rng.integers(1, 11))
        s = rng.standard_normal(length).cumsum() * rng.uniform(0, 1) \
            + rng.standard_normal(length)
        np.testing.assert_allclose(pacf(s, k), padded_ls_pacf(s, k), atol=1e-6)
    p = pacf(ar1(0.7, 10_000, seed=7), 10)
    assert abs(p[1] - 0.7) <= 0.05
    assert np.all(np.abs(p[2:11]) < 0.05)


def test_c5_sax(criterion):
    criterion("5. breakpoints, equiprobability, PAA round trip")
    np.testing.assert_allclose(gaussian_breakpoints(4).cuts,
                               [-0.6745, 0.0, 0.6745], atol=1e-4)
    draws = np.random.default_rng(5).standard_normal(1_000_000)
    for a in (3, 5, 7, 9):
        seg = np.searchsorted(gaussian_breakpoints(a).cuts, draws, side="left")
        freq = np.bincount(seg, minlength=a) / draws.size
        assert np.all(np.abs(freq - 1 / a) <= 0.01)
    rng = np.random.default_rng(55)
    for _ in range(500):
        n = int(rng.integers(1, 300))
        w = int(rng.integers(1, n + 1))
        s = rng.standard_normal(n)
        p = paa(s, w)
        recon = reconstruct_paa(p)
        assert recon.size == n
        assert np.array_equal(paa(recon, w).means, p.means)


def test_c6_kl(criterion):
    criterion("6. KL non-negativity, zero iff equal, smoothed hand example")
    rng = np.random.default_rng(6)
    for _ in range(10_000):
        k = int(rng.integers(2, 12))
        p = rng.integers(0, 30, k)
        q = rng.integers(0, 30, k)
        d = kl_divergence(p, q)
        assert d >= 0
        ps = (p + 1) / (p.sum() + k)
        qs = (q + 1) / (q.sum() + k)
        if np.allclose(ps, qs, rtol=0, atol=1e-15):
            assert d == 0
        else:
            assert d > 0
    assert kl_divergence([4, 4, 2], [4, 4, 2]) == 0
    assert abs(kl_divergence([10, 0], [0, 10]) - 1.998) <= 1e-3


def test_c7_classification(criterion):
    criterion("7. synthetic 1NN sanity (blobs raw, motifs BoP)")
    assert nn1_euclidean(generate("blobs", 40, 60, 1), generate("blobs", 40, 60, 2)) == 0
    train = generate("motifs", 20, 128, 0)
    test = generate("motifs", 20, 128, 100)
    assert nn1_bop(train, test, SaxConfig(128, 8, 4)) == 0


# ----------------------------------------------------------- criterion 8

UCR_DIR = os.environ.get("SAXLAB_UCR_DIR")


def _ucr_file(name, split="TRAIN"):
    if not UCR_DIR:
        return None
    root = Path(UCR_DIR)
    for folder in (root / name, root):
        for ext in (".tsv", ".txt", ""):
            p = folder / f"{name}_{split}{ext}"
            if p.is_file():
                return p
    return None


# dataset -> (archive name, Table 2 SAX IEC < PAA IEC)
TABLE2_SIGNS = {"ECG": ("ECG200", True), "Coffee": ("Coffee", True),
                "OliveOil": ("OliveOil", True), "Adiac": ("Adiac", False)}


@pytest.mark.skipif(_ucr_file("ECG200") is None and _ucr_file("Coffee") is None,
                    reason="UCR archive not available (set SAXLAB_UCR_DIR)")
def test_c8_ucr(criterion):
    criterion("8. UCR checks (conditional on local data)")
    ecg = _ucr_file("ECG200")
    if ecg is not None:
        ds = load_dataset(ecg, "ECG")
        for s in ds.samples:
            _, word = sax(s, 12, 7)
            assert len(word) == 12 and word.symbols.max() < 7
    for key, (archive, sax_lower) in TABLE2_SIGNS.items():
        path = _ucr_file(archive)
        if path is None:
            continue
        report = analyze_dataset(load_dataset(path, key))
        agg = report["aggregates"]
        assert (agg["sax_mean"]["iec"] < agg["paa_mean"]["iec"]) == sax_lower, key
    coffee = _ucr_file("Coffee")
    if coffee is not None:
        agg = analyze_dataset(load_dataset(coffee, "Coffee"))["aggregates"]["abs_mean_acf"]
        assert agg["raw"] > agg["sax"] > agg["paa"]
        for rep, want in (("raw", 0.4723), ("sax", 0.3237), ("paa", 0.3227)):
            assert abs(agg[rep] - want) <= 0.05, rep
