"""Smallest feasible eps for a monotone decision procedure."""

from __future__ import annotations

from typing import Callable, Iterable

import numpy as np

__all__ = ["minimize_monotone", "unique_sorted"]


def unique_sorted(values: Iterable[float], tol: float = 1e-12) -> np.ndarray:
    """Sort finite non-negative values and drop near-duplicates (within ``tol``)."""
    v = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
    v = np.sort(v[np.isfinite(v) & (v >= 0)])
    if len(v) == 0:
        return v
    keep = np.concatenate([[True], np.diff(v) > tol])
    return v[keep]


def minimize_monotone(
    decide: Callable[[float], bool], candidates, hi: float, tol: float
) -> float:
    """Return ``e`` with ``decide(e)`` true and ``decide(e - tol)`` false.

    ``decide`` must be monotone in eps and true at ``hi``. The sorted
    candidates below ``hi`` are binary-searched first; the gap between the
    first feasible candidate and its predecessor is then bisected down to
    ``tol``, so a missing critical value costs time, never correctness.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not decide(hi):
        raise RuntimeError(f"decision is false at the bracket top {hi!r}")
    cands = unique_sorted(np.append(np.asarray(candidates, dtype=float), [0.0, hi]))
    cands = cands[cands <= hi]
    # invariant: decide(cands[right]) true; decide(cands[left]) false unless left == -1
    left, right = -1, len(cands) - 1
    while right - left > 1:
        mid = (left + right) // 2
        if decide(float(cands[mid])):
            right = mid
        else:
            left = mid
    best = float(cands[right])
    if left < 0:
        return best
    lo = float(cands[left])
    while best - lo > tol:
        mid = 0.5 * (lo + best)
        if mid <= lo or mid >= best:
            break
        if decide(mid):
            best = mid
        else:
            lo = mid
    return best
