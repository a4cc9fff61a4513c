"""Matching a polygonal curve to a set of precise points.

Segments of ``P`` are numbered ``1..n`` throughout this module (and in
``approx``) so that index ``0`` and ``n + 1`` can stand for the balls around
the start and end of ``P``, and a reachability value of ``0`` can mean
"unreachable".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import check_cap, default_cap
from .frechet import Curve, LinePropagator, as_curve, line_accepts
from .geom import SQ_TOL, ball_segment_chords
from .search import minimize_monotone

__all__ = [
    "Visit",
    "MatchWitness",
    "DecisionResult",
    "ReachTable",
    "as_points",
    "discrete_subset_decide",
    "discrete_allpoints_decide",
    "reachability_table",
    "continuous_subset_decide",
    "continuous_subset_optimize",
    "critical_eps_candidates",
    "brute_force_subset_decide",
    "brute_force_allpoints_decide",
    "brute_force_optimize",
]

PARAM_SLACK = 1e-12


def as_points(S) -> np.ndarray:
    pts = np.array(S, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("point set must not be empty")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point coordinates must be finite")
    return pts


@dataclass(frozen=True)
class Visit:
    point: int
    segment: int
    position: float


@dataclass
class MatchWitness:
    """Output curve ``Q`` as point indices plus its visit schedule on ``P``.

    ``visits[k]`` says where along ``P`` (segment, parameter) the vertex
    ``q_vertices[k]`` is matched. For discrete problems ``segment`` holds the
    0-based index of the matched vertex of ``P`` and ``position`` is 0.
    """

    q_vertices: List[int]
    visits: List[Visit] = field(default_factory=list)

    def curve(self, S) -> Curve:
        return Curve(as_points(S)[self.q_vertices])

    def to_json(self) -> dict:
        return {
            "q_vertices": list(map(int, self.q_vertices)),
            "visits": [[v.point, v.segment, v.position] for v in self.visits],
        }


@dataclass
class DecisionResult:
    feasible: bool
    witness: Optional[MatchWitness] = None

    def __bool__(self):
        return self.feasible


def _dist(P: Curve, S: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum((P.vertices[:, None, :] - S[None, :, :]) ** 2, axis=-1))


# --------------------------------------------------------------------------
# discrete variants


def discrete_subset_decide(P, S, eps: float) -> DecisionResult:
    """Every vertex ball of ``P`` must contain some point of ``S``."""
    P, S = as_curve(P), as_points(S)
    if eps < 0:
        return DecisionResult(False)
    d2 = _dist(P, S) ** 2
    inside = d2 <= eps * eps + SQ_TOL
    if not inside.any(axis=1).all():
        return DecisionResult(False)
    chosen = [int(np.argmin(np.where(row, d, np.inf))) for row, d in zip(inside, d2)]
    visits = [Visit(s, j, 0.0) for j, s in enumerate(chosen)]
    return DecisionResult(True, MatchWitness(chosen, visits))


def discrete_allpoints_decide(P, S, eps: float) -> DecisionResult:
    """Subset condition plus: every point of ``S`` lies in some vertex ball."""
    P, S = as_curve(P), as_points(S)
    if eps < 0:
        return DecisionResult(False)
    d2 = _dist(P, S) ** 2
    inside = d2 <= eps * eps + SQ_TOL
    if not inside.any(axis=1).all() or not inside.any(axis=0).all():
        return DecisionResult(False)
    # nearest vertex per point; argmin already breaks ties to the lower index
    assigned = np.argmin(d2, axis=0)
    order: List[int] = []
    visits: List[Visit] = []
    for j in range(len(P)):
        group = [int(s) for s in np.flatnonzero(assigned == j)]
        if not group:
            group = [int(np.argmin(np.where(inside[j], d2[j], np.inf)))]
        order.extend(group)
        visits.extend(Visit(s, j, 0.0) for s in group)
    return DecisionResult(True, MatchWitness(order, visits))


# --------------------------------------------------------------------------
# shared geometry for the continuous algorithms


class Arrangement:
    """Chords, cylinder memberships and hop intervals for ``(P, S, eps)``.

    Rows of ``chord_lo``/``chord_hi``/``in_cyl`` are indexed by segment number
    ``0..n+1``; rows 0 and ``n+1`` hold membership in the start/end balls.
    ``hop_lo[m, s, t]``/``hop_hi[m, s, t]`` is the parameter interval of the
    segment ``s -> t`` within ``eps`` of vertex ``m`` of ``P`` (empty intervals
    are encoded as ``lo = inf``).
    """

    def __init__(self, P, S, eps: float):
        self.P = P = as_curve(P)
        self.S = S = as_points(S)
        self.eps = float(eps)
        self.n = n = P.n
        self.k = k = len(S)
        V = P.vertices
        d2 = np.sum((V[:, None, :] - S[None]) ** 2, axis=-1)
        ball = d2 <= eps * eps + SQ_TOL
        self.chord_lo = np.zeros((n + 2, k))
        self.chord_hi = np.ones((n + 2, k))
        self.in_cyl = np.zeros((n + 2, k), dtype=bool)
        self.in_cyl[0] = ball[0]
        self.in_cyl[n + 1] = ball[-1]
        if n > 0:
            a = V[:-1, None, :]
            d = (V[1:] - V[:-1])[:, None, :]
            lo, hi, hit = ball_segment_chords(a, d, S[None], eps)
            self.chord_lo[1 : n + 1] = lo
            self.chord_hi[1 : n + 1] = hi
            self.in_cyl[1 : n + 1] = hit
        self._hop = None

    def _hops(self):
        if self._hop is None:
            n, k, S, V = self.n, self.k, self.S, self.P.vertices
            lo = np.full((n + 1, k, k), np.inf)
            hi = np.full((n + 1, k, k), -np.inf)
            if n > 1:
                a = S[:, None, :]
                d = S[None, :, :] - S[:, None, :]
                c = V[1:n, None, None, :]
                l, h, hit = ball_segment_chords(a[None], d[None], c, self.eps)
                lo[1:n] = np.where(hit, l, np.inf)
                hi[1:n] = np.where(hit, h, -np.inf)
            self._hop = (lo, hi)
        return self._hop

    def hop_rows(self, i: int, src: np.ndarray) -> np.ndarray:
        """Furthest segment ``j > i`` reachable by the segment ``s -> t``.

        For each ``s`` in ``src`` (assumed visited somewhere on segment ``i``)
        and every ``t``, returns the largest ``j > i`` such that ``s -> t`` can
        be matched to ``P`` from segment ``i`` into segment ``j`` with ``t`` in
        ``C_j``, or 0 when no such ``j`` exists.
        """
        n = self.n
        src = np.asarray(src, dtype=int)
        last = np.zeros((len(src), self.k), dtype=int)
        if i >= n or len(src) == 0:
            return last
        lo, hi = self._hops()
        u = np.zeros((len(src), self.k))
        alive = np.ones((len(src), self.k), dtype=bool)
        for m in range(i, n):
            u = np.maximum(u, lo[m][src])
            alive &= u <= hi[m][src] + PARAM_SLACK
            if not alive.any():
                break
            j = m + 1
            last[alive & self.in_cyl[j][None, :]] = j
        return last


@dataclass
class ReachTable:
    """``values[i, s, t]`` for segment numbers ``i = 1..n`` (row 0 unused).

    Each entry is 0 or the largest segment ``j >= i`` at which ``t`` can be
    visited after ``s`` was visited on segment ``i`` at ``positions[i, s]``.
    """

    values: np.ndarray
    positions: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0] - 1

    def __getitem__(self, key):
        return int(self.values[key])


def reachability_table(P, S, eps: float, positions=None) -> ReachTable:
    """Reachability function ``r_i(s, t)`` for every segment and ordered pair.

    The visit of ``s`` on segment ``i`` is taken at ``positions[i, s]``
    (defaults to the left end of the chord ``P_i[s]``, the most permissive
    place to stand on that segment).
    """
    geo = P if isinstance(P, Arrangement) else Arrangement(P, S, eps)
    n, k = geo.n, geo.k
    pos = geo.chord_lo.copy() if positions is None else np.asarray(positions, dtype=float)
    values = np.zeros((n + 1, k, k), dtype=int)
    everyone = np.arange(k)
    for i in range(1, n + 1):
        row = geo.hop_rows(i, everyone)
        same = geo.in_cyl[i][None, :] & (geo.chord_hi[i][None, :] >= pos[i][:, None] - PARAM_SLACK)
        row = np.where(row > 0, row, np.where(same, i, 0))
        row[~geo.in_cyl[i]] = 0
        values[i] = row
    return ReachTable(values, pos[: n + 1])


HopFilter = Callable[[int, np.ndarray, np.ndarray], np.ndarray]


@dataclass
class SweepResult:
    reached: np.ndarray
    position: np.ndarray
    parent: Dict[Tuple[int, int], tuple]
    final: Optional[int]


def sweep(geo: Arrangement, hop_filter: Optional[HopFilter] = None) -> SweepResult:
    """Forward reachability over the segments of ``P``.

    For every segment the leftmost reachable position of each point is kept;
    within one segment any later point of a chord can be reached from the
    leftmost seed, and forward hops do not depend on the position inside the
    segment they leave. ``hop_filter`` may shrink the hop targets (used by
    the restricted all-points algorithm).
    """
    n, k = geo.n, geo.k
    reached = np.zeros((n + 2, k), dtype=bool)
    position = np.full((n + 2, k), np.nan)
    parent: Dict[Tuple[int, int], tuple] = {}
    reach_until = np.zeros(k, dtype=int)
    reach_src = np.full((k, 2), -1, dtype=int)
    for i in range(1, n + 1):
        hop_seed = geo.in_cyl[i] & (reach_until >= i)
        start_seed = geo.in_cyl[0] if i == 1 else np.zeros(k, dtype=bool)
        seeds = hop_seed | start_seed
        if not seeds.any():
            continue
        lo, hi = geo.chord_lo[i], geo.chord_hi[i]
        s0 = int(np.flatnonzero(seeds)[np.argmin(lo[seeds])])
        floor = lo[s0]
        cand = np.maximum(floor, lo)
        ok = geo.in_cyl[i] & (cand <= hi + PARAM_SLACK)
        reached[i] = seeds | ok
        position[i] = np.where(seeds, lo, np.where(ok, cand, np.nan))
        for t in np.flatnonzero(reached[i]):
            if start_seed[t]:
                parent[(i, t)] = ("start",)
            elif hop_seed[t]:
                parent[(i, t)] = ("hop", int(reach_src[t, 0]), int(reach_src[t, 1]))
            else:
                parent[(i, t)] = ("stay", i, s0)
        src = np.flatnonzero(reached[i])
        last = geo.hop_rows(i, src)
        if hop_filter is not None:
            last = hop_filter(i, src, last)
        best = last.max(axis=0)
        arg = src[last.argmax(axis=0)]
        upd = best > reach_until
        reach_until[upd] = best[upd]
        reach_src[upd, 0] = i
        reach_src[upd, 1] = arg[upd]
    final_ok = np.flatnonzero(reached[n] & geo.in_cyl[n + 1]) if n > 0 else np.array([], int)
    final = int(final_ok[0]) if len(final_ok) else None
    return SweepResult(reached, position, parent, final)


def trace_path(res: SweepResult, n: int) -> List[Tuple[int, int, float]]:
    """Back-track the sweep into ``(point, segment, position)`` triples."""
    state = (n, res.final)
    out = []
    while True:
        i, t = state
        out.append((t, i, float(res.position[i, t])))
        par = res.parent[state]
        if par[0] == "start":
            break
        if par[0] == "stay" and par[2] == t:
            break
        state = (par[1], par[2])
    return out[::-1]


def continuous_subset_decide(P, S, eps: float) -> DecisionResult:
    """Is there a curve on (a subset of, with repeats) ``S`` within ``eps`` of ``P``?"""
    if eps < 0:
        return DecisionResult(False)
    geo = Arrangement(P, S, eps)
    if geo.n == 0:
        hits = np.flatnonzero(geo.in_cyl[0])
        if len(hits) == 0:
            return DecisionResult(False)
        s = int(hits[0])
        return DecisionResult(True, MatchWitness([s], [Visit(s, 0, 0.0)]))
    res = sweep(geo)
    if res.final is None:
        return DecisionResult(False)
    path = trace_path(res, geo.n)
    return DecisionResult(
        True, MatchWitness([p for p, _, _ in path], [Visit(*v) for v in path])
    )


# --------------------------------------------------------------------------
# optimisation


def critical_eps_candidates(P, S) -> np.ndarray:
    """Sorted, de-duplicated critical values of eps for matching ``P`` to ``S``.

    Includes point-vertex distances, point-segment distances, vertex distances
    to every segment between two points, and the eps at which the chords of
    two points on a common segment of ``P`` start to overlap.
    """
    from .search import unique_sorted

    P, S = as_curve(P), as_points(S)
    V = P.vertices
    out = [_dist(P, S).ravel()]
    k = len(S)
    if P.n > 0:
        a = V[:-1]
        d = V[1:] - V[:-1]
        ll = np.sum(d * d, axis=1)
        safe = np.where(ll == 0, 1.0, ll)
        w = S[:, None, :] - a[None]
        u = np.sum(w * d[None], axis=-1) / safe
        near = a[None] + np.clip(u, 0, 1)[..., None] * d[None]
        out.append(np.sqrt(np.sum((S[:, None] - near) ** 2, axis=-1)).ravel())
        # alignment: right(P_i[s]) meets left(P_i[t])
        good = ll > 0
        length = np.sqrt(ll[good])
        x = u[:, good] * length  # (k, n') along-segment offsets
        perp2 = np.maximum(np.sum(w[:, good] ** 2, axis=-1) - x**2, 0.0)
        D = x[None, :, :] - x[:, None, :]  # x_t - x_s for [s, t, i]
        A2 = perp2[:, None, :]
        B2 = perp2[None, :, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            num = D**2 - A2 + B2
            root_b = num / (2 * D)
            e2 = B2 + root_b**2
            valid = (D > 0) & (num >= 0) & (np.sqrt(np.maximum(e2 - A2, 0)) <= D + 1e-12)
        out.append(np.sqrt(e2[valid]))
    if k > 1 and P.n >= 0:
        i, j = np.triu_indices(k, 1)
        a = S[i]
        d = S[j] - S[i]
        ll = np.sum(d * d, axis=1)
        safe = np.where(ll == 0, 1.0, ll)
        u = np.clip(np.sum((V[:, None] - a[None]) * d[None], axis=-1) / safe, 0, 1)
        near = a[None] + u[..., None] * d[None]
        out.append(np.sqrt(np.sum((V[:, None] - near) ** 2, axis=-1)).ravel())
    return unique_sorted(np.concatenate(out))


def continuous_subset_optimize(P, S, tol: float = 1e-9):
    """Smallest eps (within ``tol``) admitting a subset match, with its witness."""
    P, S = as_curve(P), as_points(S)
    hi = float(np.max(_dist(P, S)))
    eps = minimize_monotone(
        lambda e: continuous_subset_decide(P, S, e).feasible,
        critical_eps_candidates(P, S),
        hi,
        tol,
    )
    return eps, continuous_subset_decide(P, S, eps).witness


# --------------------------------------------------------------------------
# exhaustive oracles


def _contained(inner, outer) -> bool:
    for a, b in zip(inner, outer):
        if a is None:
            continue
        if b is None or a[0] < b[0] - PARAM_SLACK or a[1] > b[1] + PARAM_SLACK:
            return False
    return True


def exhaustive_search(
    P,
    S,
    eps: float,
    *,
    unique: bool,
    require_all: bool,
    closest: Optional[Sequence[int]] = None,
    max_len: Optional[int] = None,
) -> Optional[List[int]]:
    """Breadth-first search over vertex sequences of ``Q`` drawn from ``S``.

    Each partial sequence is summarised by its last point, the reachable part
    of the free-space line of that point, the set of points used so far and
    (with ``closest``) the points already matched on their closest segment.
    A summary is dropped when another one with the same last point reaches
    at least as much of its line with an equally good bookkeeping state.
    When ``closest`` is given (0-based segment per point), every point must
    in addition be matched at least once to a position on its closest
    segment. Returns a witness sequence of point indices, or None.
    """
    P, S = as_curve(P), as_points(S)
    k = len(S)
    full = (1 << k) - 1
    if max_len is None:
        max_len = k if unique else (P.n + 1) * k
    if P.n == 0:
        inside = np.sum((S - P.vertices[0]) ** 2, axis=1) <= eps * eps + SQ_TOL
        if require_all:
            return list(range(k)) if inside.all() else None
        hits = np.flatnonzero(inside)
        return [int(hits[0])] if len(hits) else None
    prop = LinePropagator(P, S, eps)
    usable = [s for s in range(k) if any(iv is not None for iv in prop.free(s))]
    if require_all and len(usable) < k:
        return None

    def restrict(line, s):
        seg = closest[s]
        return [iv if i == seg else None for i, iv in enumerate(line)]

    def variants(line, s, used, done):
        bit = 1 << s
        yield line, used | bit, done
        if closest is not None and not done & bit:
            r = restrict(line, s)
            if any(iv is not None for iv in r):
                yield r, used | bit, done | bit

    def accepted(line, used, done):
        if not line_accepts(line):
            return False
        if closest is not None:
            return done == full
        return used == full if require_all else True

    def no_worse(u_old, d_old, u_new, d_new):
        # is the stored bookkeeping at least as good as the new one?
        if d_new & ~d_old:
            return False
        if unique and require_all:
            return u_old == u_new
        if unique:
            return u_old & ~u_new == 0
        if require_all:
            return u_new & ~u_old == 0
        return True

    store: Dict[int, list] = {}
    parent = {}

    def admit(s, line, used, done, par):
        bucket = store.setdefault(s, [])
        for u, d, l in bucket:
            if no_worse(u, d, used, done) and _contained(line, l):
                return None
        node = (s, len(parent))
        bucket.append((used, done, line))
        parent[node] = par
        return node

    queue = deque()
    for s in usable:
        line0 = prop.initial(s)
        if all(iv is None for iv in line0):
            continue
        for line, used, done in variants(line0, s, 0, 0):
            node = admit(s, line, used, done, None)
            if node is not None:
                queue.append((node, line, used, done, 1))
    while queue:
        node, line, used, done, depth = queue.popleft()
        s = node[0]
        if accepted(line, used, done):
            seq = []
            cur = node
            while cur is not None:
                seq.append(cur[0])
                cur = parent[cur]
            return seq[::-1]
        if depth >= max_len:
            continue
        for t in usable:
            if unique and used >> t & 1:
                continue
            nxt = prop.advance(line, s, t)
            if all(iv is None for iv in nxt):
                continue
            for nline, nused, ndone in variants(nxt, t, used, done):
                child = admit(t, nline, nused, ndone, node)
                if child is not None:
                    queue.append((child, nline, nused, ndone, depth + 1))
    return None


def _any_cylinder(P: Curve, s, eps):
    V = P.vertices
    lo, hi, hit = ball_segment_chords(V[:-1], V[1:] - V[:-1], s, eps)
    return [(l, h) if ok else None for l, h, ok in zip(lo, hi, hit)]


def brute_force_subset_decide(P, S, eps: float, unique: bool = False, cap: Optional[int] = None) -> bool:
    """Exhaustive decision for the (unique or non-unique) subset problem."""
    S = as_points(S)
    check_cap("k", len(S), default_cap(9) if cap is None else cap)
    if eps < 0:
        return False
    return exhaustive_search(P, S, eps, unique=unique, require_all=False) is not None


def brute_force_allpoints_decide(P, S, eps: float, unique: bool = False, cap: Optional[int] = None) -> bool:
    """Exhaustive decision requiring every point of ``S`` to appear in ``Q``."""
    S = as_points(S)
    check_cap("k", len(S), default_cap(7) if cap is None else cap)
    if eps < 0:
        return False
    return exhaustive_search(P, S, eps, unique=unique, require_all=True) is not None


def brute_force_optimize(P, S, *, require_all: bool, unique: bool = False, tol: float = 1e-9, cap: Optional[int] = None):
    """Smallest eps (within ``tol``) accepted by the exhaustive oracle.

    Returns ``(eps, order)`` with ``order`` a witness sequence of point
    indices at that eps.
    """
    P, S = as_curve(P), as_points(S)
    check_cap("k", len(S), default_cap(7 if require_all else 9) if cap is None else cap)
    decide = lambda e: exhaustive_search(P, S, e, unique=unique, require_all=require_all) is not None
    hi = float(np.max(_dist(P, S)))
    eps = minimize_monotone(decide, critical_eps_candidates(P, S), hi, tol)
    return eps, exhaustive_search(P, S, eps, unique=unique, require_all=require_all)
