"""Dynamic time warping over raw numeric series.

Local cost is the squared sample difference and the accumulated value is
returned without a final square root: 1-NN rankings are invariant under the
monotone root, and the squared form skips a needless operation. Swap in
abs() at the single marked line if an L1 local cost is ever needed.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _accumulate(x, y):
    # Two rolling rows; only the final accumulated cell is needed.
    n, m = x.size, y.size
    prev = np.empty(m)
    cur = np.empty(m)
    prev[0] = (x[0] - y[0]) ** 2  # local cost
    for j in range(1, m):
        prev[j] = prev[j - 1] + (x[0] - y[j]) ** 2
    for i in range(1, n):
        cur[0] = prev[0] + (x[i] - y[0]) ** 2
        for j in range(1, m):
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = best + (x[i] - y[j]) ** 2
        prev, cur = cur, prev
    return prev[m - 1]


def _as_input(values) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("dtw_distance requires non-empty 1-d series")
    return arr


def dtw_distance(s, r) -> float:
    """Minimal accumulated squared-difference cost over all warping paths.

    Unconstrained (no warping window); the two series may have different
    lengths. The kernel releases the GIL, so pairwise matrices can be
    evaluated from a thread pool.
    """
    x = _as_input(s)
    y = _as_input(r)
    return float(_accumulate(x, y))


def cost_matrix(s, r) -> np.ndarray:
    """Full accumulated-cost matrix of the recurrence.

    cell (0,0) holds the first local cost; the first row and column have a
    single predecessor each; cell (n-1, m-1) equals dtw_distance(s, r).
    Intended for inspection and testing, not the hot path.
    """
    x = _as_input(s)
    y = _as_input(r)
    local = (x[:, None] - y[None, :]) ** 2
    acc = np.empty_like(local)
    acc[0, 0] = local[0, 0]
    acc[0, 1:] = local[0, 1:].cumsum() + local[0, 0]
    acc[1:, 0] = local[1:, 0].cumsum() + local[0, 0]
    for i in range(1, x.size):
        for j in range(1, y.size):
            acc[i, j] = local[i, j] + min(acc[i - 1, j], acc[i, j - 1], acc[i - 1, j - 1])
    return acc
