"""PAA, Gaussian-breakpoint SAX and reconstruction to the original length."""
from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.stats import norm

from .core import as_series, znormalize

MAX_ALPHABET = 26
LETTERS = string.ascii_uppercase


@dataclass(frozen=True)
class SaxConfig:
    """Window length ``n``, word number ``w`` and alphabet size ``a``."""

    n: int
    w: int
    a: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 1 <= self.w <= self.n:
            raise ValueError(f"w must be in [1, n={self.n}], got {self.w}")
        check_alphabet(self.a)


@dataclass(frozen=True)
class PaaValues:
    means: np.ndarray
    source_length: int

    @property
    def w(self) -> int:
        return int(self.means.size)


@dataclass(frozen=True)
class SaxWord:
    symbols: np.ndarray
    alphabet: int

    def __str__(self) -> str:
        return word_to_letters(self.symbols)

    def __len__(self) -> int:
        return int(self.symbols.size)


@dataclass(frozen=True)
class Breakpoints:
    cuts: np.ndarray

    @property
    def alphabet(self) -> int:
        return int(self.cuts.size) + 1


def check_alphabet(a: int) -> None:
    if not 2 <= a <= MAX_ALPHABET:
        raise ValueError(f"alphabet size must be in [2, {MAX_ALPHABET}], got {a}")


def window_bounds(n: int, w: int) -> np.ndarray:
    """Boundaries ``floor(i*n/w)`` for i = 0..w; window i is ``[b[i], b[i+1])``."""
    if not 1 <= w <= n:
        raise ValueError(f"word count must be in [1, {n}], got {w}")
    return (np.arange(w + 1) * n) // w


def paa(s, w: int) -> PaaValues:
    """Piecewise aggregate approximation with floor-boundary windows.

    Windows need not be of equal size when ``w`` does not divide the
    series length; every sample still belongs to exactly one window.

    >>> paa([1, 2, 3, 4, 5], 2).means
    array([1.5, 4. ])
    """
    s = as_series(s)
    bounds = window_bounds(s.size, w)
    sizes = np.diff(bounds)
    # shifting by each window's first sample keeps constant windows exact
    first = s[bounds[:-1]]
    offsets = np.add.reduceat(s - np.repeat(first, sizes), bounds[:-1])
    return PaaValues(first + offsets / sizes, s.size)


@lru_cache(maxsize=None)
def _cuts(a: int) -> tuple:
    return tuple(norm.ppf(np.arange(1, a) / a))


def gaussian_breakpoints(a: int) -> Breakpoints:
    """Cut points splitting N(0, 1) into ``a`` equiprobable segments."""
    check_alphabet(a)
    return Breakpoints(np.array(_cuts(a)))


def sax_word(p: PaaValues, b: Breakpoints) -> SaxWord:
    """Symbol index = number of cuts strictly below the PAA value."""
    symbols = np.searchsorted(b.cuts, p.means, side="left")
    return SaxWord(symbols.astype(np.int64), b.alphabet)


def sax(s, w: int, a: int) -> tuple[PaaValues, SaxWord]:
    """z-normalize, reduce and symbolize in one step."""
    p = paa(znormalize(s), w)
    return p, sax_word(p, gaussian_breakpoints(a))


def expand(values, n: int) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    bounds = window_bounds(n, values.size)
    return np.repeat(values, np.diff(bounds))


def reconstruct_paa(p: PaaValues) -> np.ndarray:
    return expand(p.means, p.source_length)


def reconstruct_sax(word: SaxWord, n: int) -> np.ndarray:
    """Symbol digits (A=0 .. Z=25) stretched back to length ``n``.

    The result is unscaled; metrics apply unit scaling themselves.
    """
    return expand(word.symbols, n)


def word_to_letters(symbols) -> str:
    return "".join(LETTERS[int(i)] for i in symbols)


def letters_to_word(text: str, alphabet: int | None = None) -> SaxWord:
    symbols = np.array([LETTERS.index(c) for c in text.upper()], dtype=np.int64)
    if alphabet is None:
        alphabet = max(2, int(symbols.max()) + 1) if symbols.size else 2
    if symbols.size and symbols.max() >= alphabet:
        raise ValueError(f"word {text!r} exceeds alphabet size {alphabet}")
    return SaxWord(symbols, alphabet)
