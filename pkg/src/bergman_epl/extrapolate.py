"""Polynomial (Richardson-Neville) extrapolation of f(h) to h = 0."""

from __future__ import annotations

import numpy as np

BOUNDARY_KS = (2, 3, 4, 5, 6)


def neville_at_zero(hs, values) -> tuple[np.ndarray, np.ndarray]:
    """Value at h = 0 of the interpolating polynomial through ``(hs, values)``.

    ``values`` may carry trailing axes; the first axis runs over ``hs``.
    Returns ``(limit, error)`` where the error is the size of the last
    tableau correction.
    """
    hs = np.asarray(hs, dtype=float)
    table = [np.asarray(v, dtype=float) for v in values]
    if len(table) < 2:
        raise ValueError("need at least two samples to extrapolate")
    prev = table
    diag_prev = prev[-1]
    for m in range(1, len(hs)):
        cur = []
        for i in range(len(prev) - 1):
            lo, hi = hs[i], hs[i + m]
            cur.append((hi * prev[i] - lo * prev[i + 1]) / (hi - lo))
        diag_prev, prev = prev[-1], cur
    return prev[0], np.abs(prev[0] - diag_prev)


def boundary_limit(fn, ks=BOUNDARY_KS):
    """Extrapolate ``fn(delta)`` to delta -> 1 from delta = 1 - 10^-k."""
    hs = [10.0**-k for k in ks]
    return neville_at_zero(hs, [fn(1 - h) for h in hs])
