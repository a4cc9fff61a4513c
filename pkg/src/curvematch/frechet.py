"""Continuous and discrete Fréchet distance between planar polygonal curves.

The continuous decision is the classic free-space reachability sweep: one row
of cells per edge of ``Q``, propagated left to right across the edges of
``P``, keeping only the reachable part of the current horizontal line. The
same row step is exposed (``initial_line``/``advance_line``) so that
exhaustive searches can grow ``Q`` one vertex at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .geom import SQ_TOL, ball_segment_chords
from .search import minimize_monotone

__all__ = [
    "Curve",
    "as_curve",
    "continuous_frechet_decide",
    "continuous_frechet_value",
    "discrete_frechet",
    "initial_line",
    "advance_line",
    "line_accepts",
    "LinePropagator",
]

_SLACK = 1e-12

Interval = Optional[Tuple[float, float]]


@dataclass(frozen=True, eq=False)
class Curve:
    """Polygonal curve given by at least one finite planar vertex."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 2)
        if len(v) == 0:
            raise ValueError("a curve needs at least one vertex")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve vertices must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def n(self) -> int:
        """Number of segments."""
        return len(self.vertices) - 1

    def __len__(self):
        return len(self.vertices)

    def segment(self, i: int):
        """Segment ``i`` (0-based) as a pair of points."""
        return self.vertices[i], self.vertices[i + 1]

    def point_at(self, i: int, u: float) -> np.ndarray:
        a, b = self.vertices[i], self.vertices[i + 1]
        return a + u * (b - a)

    def subdivide(self, m: int) -> "Curve":
        """Split every edge into ``m`` equal pieces."""
        if self.n == 0 or m == 1:
            return self
        t = np.arange(m) / m
        a, b = self.vertices[:-1], self.vertices[1:]
        pts = (a[:, None, :] + t[None, :, None] * (b - a)[:, None, :]).reshape(-1, 2)
        return Curve(np.vstack([pts, self.vertices[-1:]]))

    def reversed(self) -> "Curve":
        return Curve(self.vertices[::-1])

    def __eq__(self, other):
        return isinstance(other, Curve) and np.array_equal(self.vertices, other.vertices)

    def __hash__(self):
        return hash(self.vertices.tobytes())

    def __repr__(self):
        return f"Curve({self.vertices.tolist()!r})"


def as_curve(c) -> Curve:
    return c if isinstance(c, Curve) else Curve(c)


def _chords_eps(curve: Curve, point, eps) -> List[Interval]:
    v = curve.vertices
    lo, hi, hit = ball_segment_chords(v[:-1], v[1:] - v[:-1], np.asarray(point, float), eps)
    return [(float(l), float(h)) if ok else None for l, h, ok in zip(lo, hi, hit)]


def _edge_chords(p_vertices: np.ndarray, q, t, eps) -> List[Interval]:
    """Free intervals on edge ``q -> t`` seen from every vertex of ``P``."""
    q = np.asarray(q, float)
    t = np.asarray(t, float)
    lo, hi, hit = ball_segment_chords(q, t - q, p_vertices, eps)
    return [(float(l), float(h)) if ok else None for l, h, ok in zip(lo, hi, hit)]


def _clip_from(iv: Interval, start: float) -> Interval:
    if iv is None:
        return None
    lo = max(iv[0], start)
    if lo > iv[1] + _SLACK:
        return None
    return (lo, max(lo, iv[1]))


def initial_line(P: Curve, q, eps: float) -> List[Interval]:
    """Reachable part of the bottom line of the free-space diagram for vertex ``q``.

    Entry ``i`` is the reachable interval on segment ``i`` of ``P`` (or None).
    Only the prefix of ``P`` that stays inside ``B(q, eps)`` from the start is
    reachable.
    """
    P = as_curve(P)
    chords = _chords_eps(P, q, eps)
    line: List[Interval] = [None] * P.n
    for i, c in enumerate(chords):
        if c is None or c[0] > _SLACK:
            break
        line[i] = c
        if c[1] < 1.0 - _SLACK:
            break
    return line


def advance_line(P: Curve, line: Sequence[Interval], q, t, eps: float) -> List[Interval]:
    """Propagate reachability through the row of cells for the edge ``q -> t``."""
    P = as_curve(P)
    v = P.vertices
    side = _edge_chords(v, q, t, eps)
    top_free = _chords_eps(P, t, eps)
    out: List[Interval] = [None] * P.n
    # reachable left boundary of the first cell: only via the corner (0, 0)
    left = side[0] if (line and line[0] is not None and line[0][0] <= _SLACK) else None
    for i in range(P.n):
        bottom = line[i]
        if left is not None:
            out[i] = top_free[i]
        elif bottom is not None:
            out[i] = _clip_from(top_free[i], bottom[0])
        right_free = side[i + 1]
        if bottom is not None:
            left = right_free
        elif left is not None:
            left = _clip_from(right_free, left[0])
        else:
            left = None
    return out


class LinePropagator:
    """``initial_line``/``advance_line`` for a fixed ``P``, point set and eps.

    Chords of every segment of ``P`` with every ball are computed once, and
    those of every edge ``s -> t`` with the vertex balls of ``P`` on first
    use, so exhaustive searches can propagate lines in plain Python.
    """

    def __init__(self, P, S, eps: float):
        self.P = as_curve(P)
        self.S = np.asarray(S, dtype=float).reshape(-1, 2)
        self.eps = float(eps)
        v = self.P.vertices
        lo, hi, hit = ball_segment_chords(
            v[:-1, None], (v[1:] - v[:-1])[:, None], self.S[None], self.eps
        )
        self._free = [
            [(float(lo[i, s]), float(hi[i, s])) if hit[i, s] else None for i in range(self.P.n)]
            for s in range(len(self.S))
        ]
        self._side = {}

    def free(self, s: int) -> List[Interval]:
        return self._free[s]

    def side(self, s: int, t: int) -> List[Interval]:
        key = (s, t)
        if key not in self._side:
            self._side[key] = _edge_chords(self.P.vertices, self.S[s], self.S[t], self.eps)
        return self._side[key]

    def initial(self, s: int) -> List[Interval]:
        line: List[Interval] = [None] * self.P.n
        for i, c in enumerate(self._free[s]):
            if c is None or c[0] > _SLACK:
                break
            line[i] = c
            if c[1] < 1.0 - _SLACK:
                break
        return line

    def advance(self, line: Sequence[Interval], s: int, t: int) -> List[Interval]:
        n = self.P.n
        out: List[Interval] = [None] * n
        first = next((i for i, iv in enumerate(line) if iv is not None), None)
        if first is None:
            return out
        last = max(i for i, iv in enumerate(line) if iv is not None)
        side = self.side(s, t)
        top_free = self._free[t]
        left = side[0] if (first == 0 and line[0][0] <= _SLACK) else None
        for i in range(first, n):
            bottom = line[i]
            if bottom is None and left is None:
                if i > last:
                    break
                continue
            if left is not None:
                out[i] = top_free[i]
            else:
                out[i] = _clip_from(top_free[i], bottom[0])
            right_free = side[i + 1]
            if bottom is not None:
                left = right_free
            else:
                left = _clip_from(right_free, left[0])
        return out


def line_accepts(line: Sequence[Interval]) -> bool:
    """True iff the end of ``P`` is reachable on this line."""
    return bool(line) and line[-1] is not None and line[-1][1] >= 1.0 - _SLACK


def continuous_frechet_decide(P, Q, eps: float) -> bool:
    """Decide ``frechet(P, Q) <= eps`` (closed semantics)."""
    if eps < 0:
        return False
    P, Q = as_curve(P), as_curve(Q)
    e2 = eps * eps + SQ_TOL
    if P.n == 0 or Q.n == 0:
        center, other = (P.vertices[0], Q.vertices) if P.n == 0 else (Q.vertices[0], P.vertices)
        return bool(np.all(np.sum((other - center) ** 2, axis=1) <= e2))
    ends = P.vertices[[0, -1]] - Q.vertices[[0, -1]]
    if np.any(np.sum(ends * ends, axis=1) > e2):
        return False
    line = initial_line(P, Q.vertices[0], eps)
    for j in range(Q.n):
        line = advance_line(P, line, Q.vertices[j], Q.vertices[j + 1], eps)
        if all(iv is None for iv in line):
            return False
    return line_accepts(line)


def _frechet_candidates(P: Curve, Q: Curve) -> np.ndarray:
    pv, qv = P.vertices, Q.vertices
    cands = [np.sqrt(np.sum((pv[:, None] - qv[None]) ** 2, axis=-1)).ravel()]
    for A, B in ((pv, qv), (qv, pv)):
        if len(B) < 2:
            continue
        a, d = B[:-1], B[1:] - B[:-1]
        dd = np.sum(d * d, axis=1)
        safe = np.where(dd == 0, 1.0, dd)
        # vertex-to-edge distances
        u = np.clip(np.sum((A[:, None] - a[None]) * d[None], axis=-1) / safe, 0, 1)
        near = a[None] + u[..., None] * d[None]
        cands.append(np.sqrt(np.sum((A[:, None] - near) ** 2, axis=-1)).ravel())
        # monotonicity events: a point of an edge equidistant from two vertices
        for x, y in combinations(range(len(A)), 2):
            mid = (A[x] + A[y]) / 2
            nrm = A[y] - A[x]
            denom = d @ nrm
            ok = np.abs(denom) > 1e-15
            s = np.where(ok, ((mid - a) @ nrm) / np.where(ok, denom, 1.0), -1.0)
            ok &= (s >= 0) & (s <= 1)
            pts = a[ok] + s[ok, None] * d[ok]
            cands.append(np.sqrt(np.sum((pts - A[x]) ** 2, axis=1)))
    return np.concatenate(cands)


def continuous_frechet_value(P, Q, tol: float = 1e-9) -> float:
    """Fréchet distance to within ``tol``.

    Returns ``e`` with ``decide(e)`` true and ``decide(e - tol)`` false,
    searching the usual critical values first and bisecting between them.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    P, Q = as_curve(P), as_curve(Q)
    cands = _frechet_candidates(P, Q)
    hi = float(np.max(np.sqrt(np.sum((P.vertices[:, None] - Q.vertices[None]) ** 2, axis=-1))))
    return minimize_monotone(lambda e: continuous_frechet_decide(P, Q, e), cands, hi, tol)


def discrete_frechet(P, Q, return_coupling: bool = False):
    """Discrete Fréchet distance by dynamic programming over couplings.

    With ``return_coupling`` the result is ``(value, coupling)`` where the
    coupling is a list of 0-based ``(i, j)`` vertex index pairs from
    ``(0, 0)`` to ``(len(P) - 1, len(Q) - 1)``.

    >>> discrete_frechet([[0, 0], [1, 0]], [[0, 1], [1, 1]])
    1.0
    """
    P, Q = as_curve(P), as_curve(Q)
    dist = np.sqrt(np.sum((P.vertices[:, None] - Q.vertices[None]) ** 2, axis=-1))
    p, q = dist.shape
    ca = np.empty((p, q))
    ca[0, 0] = dist[0, 0]
    for i in range(1, p):
        ca[i, 0] = max(ca[i - 1, 0], dist[i, 0])
    for j in range(1, q):
        ca[0, j] = max(ca[0, j - 1], dist[0, j])
    for i in range(1, p):
        for j in range(1, q):
            ca[i, j] = max(min(ca[i - 1, j - 1], ca[i - 1, j], ca[i, j - 1]), dist[i, j])
    value = float(ca[-1, -1])
    if not return_coupling:
        return value
    path = [(p - 1, q - 1)]
    i, j = p - 1, q - 1
    while (i, j) != (0, 0):
        options = []
        if i > 0 and j > 0:
            options.append((ca[i - 1, j - 1], 0, (i - 1, j - 1)))
        if i > 0:
            options.append((ca[i - 1, j], 1, (i - 1, j)))
        if j > 0:
            options.append((ca[i, j - 1], 2, (i, j - 1)))
        i, j = min(options)[2]
        path.append((i, j))
    return value, path[::-1]
