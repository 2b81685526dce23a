"""SAX front end: z-normalization, PAA reduction, Gaussian breakpoints, MINDIST.

Turns raw numeric series into strings over a small alphabet:

1. z-normalize the series (population standard deviation),
2. reduce it to segment means (PAA),
3. map each segment to the equiprobable Gaussian interval that contains it.

Also provides the lower-bounding MINDIST between two such strings and the
corresponding PAA distance between the reduced series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .sequences import Alphabet, SymbolicSequence

# Below this population std a series is treated as constant and maps to zeros.
ZERO_VARIANCE_EPS = 1e-12


def as_series(values) -> np.ndarray:
    """Validate and convert `values` into a finite non-empty 1-d float array."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("a time series must be a non-empty 1-d array of samples")
    if not np.all(np.isfinite(arr)):
        raise ValueError("a time series must contain finite values only")
    return arr


@dataclass(frozen=True, eq=False)
class PAAVector:
    """Segment means of a series together with the original length."""

    segments: np.ndarray
    source_length: int

    def __post_init__(self):
        if not 1 <= len(self.segments) <= self.source_length:
            raise ValueError(
                f"segment count must be in [1, {self.source_length}], "
                f"got {len(self.segments)}"
            )

    def __len__(self) -> int:
        return len(self.segments)


@dataclass(frozen=True, eq=False)
class BreakpointTable:
    """The alpha - 1 standard-normal quantiles splitting the line into
    alpha equiprobable intervals."""

    alpha: int
    cuts: np.ndarray

    def __post_init__(self):
        if len(self.cuts) != self.alpha - 1:
            raise ValueError("a table for alphabet size alpha needs alpha - 1 cuts")
        if np.any(np.diff(self.cuts) <= 0):
            raise ValueError("breakpoints must be strictly increasing")


def z_normalize(values) -> np.ndarray:
    """Shift and scale to mean 0 and population standard deviation 1.

    A (near-)constant series maps to all zeros instead of raising, so that
    flat instances in a dataset never abort a classification run.
    """
    arr = as_series(values)
    sd = arr.std()
    if sd < ZERO_VARIANCE_EPS:
        return np.zeros_like(arr)
    return (arr - arr.mean()) / sd


def paa(values, n_segments: int) -> PAAVector:
    """Reduce a series to `n_segments` segment means.

    When n_segments divides the length, segments are equal blocks. Otherwise
    sample j is assigned to segment floor(j * n_segments / n) and each segment
    averages its assigned samples.
    """
    arr = as_series(values)
    n = arr.size
    if not 1 <= n_segments <= n:
        raise ValueError(f"segment count must be in [1, {n}], got {n_segments}")
    assignment = (np.arange(n) * n_segments) // n
    sums = np.bincount(assignment, weights=arr, minlength=n_segments)
    sizes = np.bincount(assignment, minlength=n_segments)
    return PAAVector(segments=sums / sizes, source_length=n)


def make_breakpoints(alpha: int) -> BreakpointTable:
    """Breakpoints at the i/alpha standard-normal quantiles, i = 1..alpha-1."""
    if not 2 <= alpha <= 26:
        raise ValueError(f"alphabet size must be in [2, 26], got {alpha}")
    cuts = norm.ppf(np.arange(1, alpha) / alpha)
    return BreakpointTable(alpha=alpha, cuts=cuts)


def symbolize(reduced, table: BreakpointTable, alphabet: Alphabet) -> SymbolicSequence:
    """Discretize segment means against the breakpoint table.

    A value maps to the symbol whose interval contains it; a value exactly on
    a cut belongs to the interval above the cut.
    """
    if len(alphabet) != table.alpha:
        raise ValueError(
            f"alphabet size {len(alphabet)} does not match table size {table.alpha}"
        )
    segments = reduced.segments if isinstance(reduced, PAAVector) else as_series(reduced)
    indices = np.searchsorted(table.cuts, segments, side="right")
    return SymbolicSequence(tuple(alphabet.symbols[i] for i in indices), alphabet)


def _symbol_indices(seq, table: BreakpointTable) -> np.ndarray:
    alphabet = getattr(seq, "alphabet", None)
    if alphabet is None:
        alphabet = Alphabet.latin(table.alpha)
    if len(alphabet) != table.alpha:
        raise ValueError(
            f"alphabet size {len(alphabet)} does not match table size {table.alpha}"
        )
    return np.array([alphabet.index(sym) for sym in seq], dtype=np.intp)


def mindist(a, b, table: BreakpointTable, source_length: int,
            n_segments: int | None = None) -> float:
    """Lower-bounding distance between two symbol strings of equal length.

    Per-position cell distance is 0 for equal or adjacent symbols, and the
    gap between the innermost separating breakpoints otherwise; the sum of
    squares is scaled by source_length / n_segments before the square root.
    """
    n_seg = len(a) if n_segments is None else n_segments
    if len(a) != n_seg or len(b) != n_seg:
        raise ValueError(
            f"symbol strings must both have length {n_seg}, got {len(a)} and {len(b)}"
        )
    if source_length < n_seg:
        raise ValueError("source length cannot be smaller than the segment count")
    ia = _symbol_indices(a, table)
    ib = _symbol_indices(b, table)
    lo = np.minimum(ia, ib)
    hi = np.maximum(ia, ib)
    # both index clamps only affect positions the adjacency rule zeroes anyway
    gaps = table.cuts[np.maximum(hi - 1, 0)] - table.cuts[np.minimum(lo, table.alpha - 2)]
    cells = np.where(hi - lo <= 1, 0.0, gaps)
    return float(np.sqrt(source_length / n_seg * np.sum(cells ** 2)))


def paa_distance(p: PAAVector, q: PAAVector) -> float:
    """Distance between two PAA reductions of same-shape series."""
    if len(p) != len(q) or p.source_length != q.source_length:
        raise ValueError(
            f"shape mismatch: ({len(p)}, n={p.source_length}) vs "
            f"({len(q)}, n={q.source_length})"
        )
    diff = p.segments - q.segments
    return float(np.sqrt(p.source_length / len(p) * np.sum(diff ** 2)))
