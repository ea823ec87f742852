import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from saxlab.core import znormalize
from saxlab.symbolic import (Breakpoints, PaaValues, SaxConfig, SaxWord,
                             gaussian_breakpoints, letters_to_word, paa,
                             reconstruct_paa, reconstruct_sax, sax, sax_word,
                             window_bounds, word_to_letters)

# inverse normal CDF at k/a, found by bisection on math.erf
CUTS_4 = [-0.6744897502, 0.0, 0.6744897502]
CUTS_7 = [-1.0675705239, -0.5659488219, -0.1800123698,
          0.1800123698, 0.5659488219, 1.0675705239]

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def series_and_w(draw):
    n = draw(st.integers(1, 120))
    s = draw(arrays(np.float64, n, elements=finite))
    return s, draw(st.integers(1, n))


def phi(x):
    return 0.5 * (1 + math.erf(x / math.sqrt(2)))


class TestPaa:
    def test_examples(self):
        assert paa([1, 2, 3, 4], 2).means.tolist() == [1.5, 3.5]
        assert paa([1, 2, 3, 4, 5], 2).means.tolist() == [1.5, 4.0]

    @given(series_and_w())
    def test_window_means(self, sw):
        s, w = sw
        n = s.size
        p = paa(s, w)
        assert p.means.size == w
        for i in range(w):
            lo, hi = (i * n) // w, ((i + 1) * n) // w
            assert p.means[i] == pytest.approx(s[lo:hi].mean(), rel=1e-9, abs=1e-9)

    @given(arrays(np.float64, st.integers(1, 50), elements=finite))
    def test_identity(self, s):
        np.testing.assert_array_equal(paa(s, s.size).means, s)

    def test_w_too_large(self):
        with pytest.raises(ValueError):
            paa([1, 2], 3)

    @given(st.integers(1, 300), st.data())
    def test_partition(self, n, data):
        w = data.draw(st.integers(1, n))
        b = window_bounds(n, w)
        assert b[0] == 0 and b[-1] == n
        assert np.all(np.diff(b) >= 1)


class TestBreakpoints:
    def test_values(self):
        assert gaussian_breakpoints(2).cuts.tolist() == [0.0]
        np.testing.assert_allclose(gaussian_breakpoints(4).cuts, CUTS_4, atol=1e-9)
        np.testing.assert_allclose(gaussian_breakpoints(7).cuts, CUTS_7, atol=1e-9)

    @pytest.mark.parametrize("a", range(2, 27))
    def test_invariants(self, a):
        c = gaussian_breakpoints(a).cuts
        assert c.size == a - 1
        assert np.all(np.diff(c) > 0)
        np.testing.assert_allclose(c, -c[::-1], atol=1e-9)
        for k in range(1, a):
            assert phi(c[k - 1]) == pytest.approx(k / a, abs=1e-6)

    @pytest.mark.parametrize("a", [1, 27])
    def test_range(self, a):
        with pytest.raises(ValueError):
            gaussian_breakpoints(a)


class TestSaxWord:
    def test_examples(self):
        p = PaaValues(np.array([-2.0]), 1)
        assert sax_word(p, gaussian_breakpoints(2)).symbols.tolist() == [0]
        p = PaaValues(np.array([0.0]), 1)
        assert sax_word(p, Breakpoints(np.array([0.0]))).symbols.tolist() == [0]

    def test_letters(self):
        assert word_to_letters([2, 0, 2, 1, 1]) == "CACBB"
        assert letters_to_word("CACBB", 3).symbols.tolist() == [2, 0, 2, 1, 1]
        with pytest.raises(ValueError):
            letters_to_word("D", 3)

    def test_uniform_on_noise(self):
        rng = np.random.default_rng(3)
        s = znormalize(rng.standard_normal(20000))
        for a in (3, 5, 8):
            _, word = sax(s, s.size, a)
            freq = np.bincount(word.symbols, minlength=a) / s.size
            assert np.all(np.abs(freq - 1 / a) < 0.05)


class TestReconstruct:
    def test_paa(self):
        p = PaaValues(np.array([1.5, 3.5]), 4)
        assert reconstruct_paa(p).tolist() == [1.5, 1.5, 3.5, 3.5]

    @given(series_and_w())
    def test_paa_roundtrip(self, sw):
        s, w = sw
        p = paa(s, w)
        r = reconstruct_paa(p)
        assert r.size == s.size
        np.testing.assert_allclose(paa(r, w).means, p.means, rtol=1e-12, atol=1e-9)
        if s.size % w == 0:
            assert r.mean() == pytest.approx(s.mean(), rel=1e-9, abs=1e-9)

    def test_sax_digits(self):
        word = SaxWord(np.array([2, 0, 2, 1, 1]), 3)
        assert reconstruct_sax(word, 5).tolist() == [2, 0, 2, 1, 1]

    @given(st.integers(1, 100))
    def test_single_symbol(self, n):
        r = reconstruct_sax(SaxWord(np.array([4]), 6), n)
        assert r.size == n and np.all(r == 4)

    @given(series_and_w(), st.integers(2, 26))
    def test_distinct_levels(self, sw, a):
        s, w = sw
        _, word = sax(s, w, a)
        r = reconstruct_sax(word, s.size)
        assert r.size == s.size
        assert np.unique(r).size <= a


class TestSaxConfig:
    def test_valid(self):
        SaxConfig(96, 12, 7)

    @pytest.mark.parametrize("args", [(0, 1, 3), (10, 11, 3), (10, 0, 3),
                                      (10, 5, 1), (10, 5, 27)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            SaxConfig(*args)
