"""Planar primitives: distances, ball/segment chords, cylinders, free-space cells.

Points are plain length-2 sequences (tuples or numpy arrays). Balls and
cylinders are closed; tangency is resolved as feasible by comparing squared
distances with an absolute slack of ``SQ_TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

SQ_TOL = 1e-12

__all__ = [
    "SQ_TOL",
    "Segment",
    "ParamInterval",
    "FreeSpaceCell",
    "as_point",
    "point_segment_distance",
    "ball_segment_intersection",
    "ball_segment_chords",
    "in_cylinder",
    "free_space_cell",
]


def as_point(p) -> np.ndarray:
    """Return ``p`` as a float array of shape (2,), rejecting NaN/inf."""
    arr = np.asarray(p, dtype=float).reshape(-1)
    if arr.shape != (2,):
        raise ValueError(f"expected a planar point, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


class Segment(NamedTuple):
    a: tuple
    b: tuple


@dataclass(frozen=True)
class ParamInterval:
    """Closed parameter interval ``[lo, hi]`` on a segment.

    ``segment_index`` is only meaningful when the interval lives on a curve
    segment; free-standing chords leave it at -1.
    """

    lo: float
    hi: float
    segment_index: int = -1

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    def contains(self, u: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= u <= self.hi + tol

    def reversed(self) -> "ParamInterval":
        return ParamInterval(1.0 - self.hi, 1.0 - self.lo, self.segment_index)


def _seg(seg):
    a, b = seg
    return as_point(a), as_point(b)


def point_segment_distance(p, seg) -> float:
    """Euclidean distance from ``p`` to the closed segment ``seg``."""
    p = as_point(p)
    a, b = _seg(seg)
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return float(math.hypot(*(p - a)))
    u = min(1.0, max(0.0, float((p - a) @ d) / dd))
    return float(math.hypot(*(a + u * d - p)))


def ball_segment_chords(a, d, c, eps):
    """Vectorised chord of segments ``a + u d`` inside balls ``B(c, eps)``.

    All arguments broadcast against each other (trailing axis of length 2 for
    ``a``, ``d`` and ``c``). Returns ``(lo, hi, hit)``; where ``hit`` is False
    the chord is empty and ``lo``/``hi`` are meaningless.
    """
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    c = np.asarray(c, dtype=float)
    eps = np.asarray(eps, dtype=float)
    w = a - c
    dd = np.sum(d * d, axis=-1)
    wd = np.sum(w * d, axis=-1)
    degenerate = dd == 0.0
    safe_dd = np.where(degenerate, 1.0, dd)
    t0 = np.where(degenerate, 0.0, -wd / safe_dd)
    tc = np.clip(t0, 0.0, 1.0)
    near = w + tc[..., None] * d
    dmin2 = np.sum(near * near, axis=-1)
    eps2 = eps * eps
    hit = dmin2 <= eps2 + SQ_TOL
    line = w + t0[..., None] * d
    m2 = np.sum(line * line, axis=-1)
    half = np.sqrt(np.maximum(eps2 - m2, 0.0) / safe_dd)
    lo = np.maximum(0.0, t0 - half)
    hi = np.minimum(1.0, t0 + half)
    # tangency slack can leave an empty interval: collapse onto the nearest point
    bad = lo > hi
    lo = np.where(bad, tc, lo)
    hi = np.where(bad, tc, hi)
    lo = np.where(degenerate, 0.0, lo)
    hi = np.where(degenerate, 1.0, hi)
    return lo, hi, hit


def ball_segment_intersection(seg, center, eps: float) -> Optional[ParamInterval]:
    """Parameter interval of ``seg`` inside the closed ball ``B(center, eps)``.

    >>> ball_segment_intersection(((0, 0), (10, 0)), (5, 0), 1)
    ParamInterval(lo=0.4, hi=0.6, segment_index=-1)
    """
    a, b = _seg(seg)
    lo, hi, hit = ball_segment_chords(a, b - a, as_point(center), float(eps))
    if not bool(hit):
        return None
    return ParamInterval(float(lo), float(hi))


def in_cylinder(p, seg, eps: float) -> bool:
    """True iff ``p`` lies in the closed cylinder of radius ``eps`` around ``seg``."""
    a, b = _seg(seg)
    _, _, hit = ball_segment_chords(a, b - a, as_point(p), float(eps))
    return bool(hit)


@dataclass(frozen=True)
class FreeSpaceCell:
    """Free portions of the four boundaries of one free-space cell.

    The cell is spanned by ``p_edge`` (horizontal axis) and ``q_edge``
    (vertical axis). ``left``/``right`` are intervals on ``q_edge`` seen from
    the start/end of ``p_edge``; ``bottom``/``top`` are intervals on
    ``p_edge`` seen from the start/end of ``q_edge``.
    """

    left: Optional[ParamInterval]
    right: Optional[ParamInterval]
    bottom: Optional[ParamInterval]
    top: Optional[ParamInterval]


def free_space_cell(p_edge, q_edge, eps: float) -> FreeSpaceCell:
    pa, pb = _seg(p_edge)
    qa, qb = _seg(q_edge)
    return FreeSpaceCell(
        left=ball_segment_intersection((qa, qb), pa, eps),
        right=ball_segment_intersection((qa, qb), pb, eps),
        bottom=ball_segment_intersection((pa, pb), qa, eps),
        top=ball_segment_intersection((pa, pb), qb, eps),
    )
