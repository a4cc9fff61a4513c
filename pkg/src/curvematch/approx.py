"""Restricted all-points matching and the factor-3 approximation built on it.

In the restricted problem every point of ``S`` must be visited at least once
on its closest segment of ``P`` (ties go to the lower segment number). The
decision runs the subset sweep of :mod:`curvematch.precise` with a modified
reachability function that never leaves a segment through a point that
would strand an essential point, never enters one too late, and never hops
over a segment that has essential points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import check_cap, default_cap
from .frechet import as_curve
from .precise import (
    PARAM_SLACK,
    Arrangement,
    DecisionResult,
    MatchWitness,
    ReachTable,
    Visit,
    as_points,
    critical_eps_candidates,
    exhaustive_search,
    reachability_table,
    sweep,
    trace_path,
)
from .search import minimize_monotone

__all__ = [
    "SegmentPointSets",
    "EntryExitSets",
    "closest_segments",
    "compute_point_sets",
    "preprocess_feasible",
    "entry_exit_sets",
    "first_essential_after",
    "modify_reachability",
    "restricted_allpoints_decide",
    "restricted_allpoints_optimize",
    "approx_allpoints",
    "brute_force_restricted_decide",
    "check_entry_exit",
]

_DIST_TIE = 1e-12


def closest_segments(P, S) -> np.ndarray:
    """1-based number of the closest segment of ``P`` for every point.

    Distances within ``1e-12`` of the minimum count as ties; the lowest
    segment number wins.
    """
    P, S = as_curve(P), as_points(S)
    if P.n == 0:
        return np.zeros(len(S), dtype=int)
    V = P.vertices
    a, d = V[:-1], V[1:] - V[:-1]
    ll = np.sum(d * d, axis=1)
    safe = np.where(ll == 0, 1.0, ll)
    u = np.clip(np.sum((S[:, None] - a[None]) * d[None], axis=-1) / safe, 0, 1)
    dist = np.sqrt(np.sum((S[:, None] - a[None] - u[..., None] * d[None]) ** 2, axis=-1))
    best = dist.min(axis=1, keepdims=True)
    return np.argmax(dist <= best + _DIST_TIE, axis=1) + 1


@dataclass
class SegmentPointSets:
    """``members[i]``/``essential[i]`` are boolean masks over ``S`` for ``i = 0..n+1``.

    Rows 0 and ``n + 1`` describe the balls around the ends of ``P``; their
    essential rows are always empty.
    """

    members: np.ndarray
    essential: np.ndarray
    closest: np.ndarray

    @property
    def n(self) -> int:
        return self.members.shape[0] - 2

    def S(self, i: int) -> List[int]:
        return [int(s) for s in np.flatnonzero(self.members[i])]

    def S_star(self, i: int) -> List[int]:
        return [int(s) for s in np.flatnonzero(self.essential[i])]


def compute_point_sets(P, S, eps: float, geo: Optional[Arrangement] = None) -> SegmentPointSets:
    geo = geo or Arrangement(P, S, eps)
    closest = closest_segments(geo.P, geo.S)
    essential = np.zeros_like(geo.in_cyl)
    for s, i in enumerate(closest):
        if i > 0:
            essential[i, s] = True
    return SegmentPointSets(geo.in_cyl.copy(), essential, closest)


def preprocess_feasible(P, S, eps: float, sets: SegmentPointSets) -> bool:
    """False when a point lies in no cylinder or an end ball holds no point."""
    n = sets.n
    if n == 0:
        return bool(sets.members[0].all())
    return bool(
        sets.members[1 : n + 1].any(axis=0).all()
        and sets.members[0].any()
        and sets.members[n + 1].any()
    )


@dataclass
class EntryExitSets:
    entry: np.ndarray  # (n + 2, k) boolean, rows 1..n meaningful
    exit: np.ndarray

    def entry_points(self, i: int) -> List[int]:
        return [int(s) for s in np.flatnonzero(self.entry[i])]

    def exit_points(self, i: int) -> List[int]:
        return [int(s) for s in np.flatnonzero(self.exit[i])]


def entry_exit_sets(P, S, eps: float, sets: SegmentPointSets, geo: Optional[Arrangement] = None) -> EntryExitSets:
    """Entry points start no later than every essential chord ends; exit points
    end no earlier than every essential chord starts."""
    geo = geo or Arrangement(P, S, eps)
    entry = np.zeros_like(sets.members)
    exit_ = np.zeros_like(sets.members)
    for i in range(1, sets.n + 1):
        mem = sets.members[i]
        ess = sets.essential[i] & mem
        lo, hi = geo.chord_lo[i], geo.chord_hi[i]
        if not ess.any():
            entry[i] = mem
            exit_[i] = mem
            continue
        entry[i] = mem & (lo <= hi[ess].min() + PARAM_SLACK)
        exit_[i] = mem & (hi >= lo[ess].max() - PARAM_SLACK)
    return EntryExitSets(entry, exit_)


def first_essential_after(sets: SegmentPointSets) -> np.ndarray:
    """``e[i]`` = first segment after ``i`` with essential points, else ``n + 1``."""
    n = sets.n
    e = np.full(n + 2, n + 1, dtype=int)
    nxt = n + 1
    for i in range(n, -1, -1):
        e[i] = nxt
        if 1 <= i <= n and sets.essential[i].any():
            nxt = i
    return e


def _last_good(sets: SegmentPointSets, ee: EntryExitSets) -> np.ndarray:
    """``out[j, t]`` = largest ``j' <= j`` with ``t`` an entry point of ``P_j'`` (else 0)."""
    n, k = sets.n, sets.members.shape[1]
    good = ee.entry & sets.members
    out = np.zeros((n + 2, k), dtype=int)
    for j in range(1, n + 1):
        out[j] = np.where(good[j], j, out[j - 1])
    return out


def _restricted_hops(sets, ee, e, last_good):
    def hop_filter(i, src, last):
        cap = np.minimum(last, e[i])
        cap = np.where(ee.exit[i][src][:, None], cap, 0)
        cols = np.arange(last.shape[1])[None, :]
        best = last_good[cap, cols]
        return np.where((last > 0) & (best > i), best, 0)

    return hop_filter


def modify_reachability(r: ReachTable, sets: SegmentPointSets, ee: EntryExitSets, e) -> ReachTable:
    """Derive ``r'`` from ``r``.

    ``r'`` is 0 where ``r`` is; otherwise the largest ``j`` in
    ``[i, cap]`` at which ``t`` may be visited, where
    ``cap = min(r, e_i)`` for exit points ``s`` of ``P_i`` and ``cap = i``
    otherwise, and ``j > i`` additionally needs ``t`` to be an entry point of
    ``P_j``.
    """
    e = np.asarray(e)
    last_good = _last_good(sets, ee)
    vals = r.values
    out = np.zeros_like(vals)
    k = vals.shape[1]
    cols = np.arange(k)[None, :]
    for i in range(1, vals.shape[0]):
        row = vals[i]
        cap = np.minimum(row, e[i])
        cap = np.where(ee.exit[i][:, None], cap, i)
        cap = np.where(row > 0, cap, 0)
        best = last_good[cap, cols]
        stay = (row > 0) & sets.members[i][None, :]
        out[i] = np.where(best > i, best, np.where(stay, i, 0))
    return ReachTable(out, r.positions)


def _order_key(geo, i):
    lo, hi = geo.chord_lo[i], geo.chord_hi[i]
    return lambda s: (lo[s], hi[s], s)


def restricted_allpoints_decide(P, S, eps: float) -> DecisionResult:
    """Decide whether a curve visiting every point at its closest segment exists.

    On success the witness is a full all-points curve: each visited segment
    is entered through an entry point, its essential points are visited in
    order of their chords, and it is left through an exit point.
    """
    if eps < 0:
        return DecisionResult(False)
    geo = Arrangement(P, S, eps)
    sets = compute_point_sets(geo.P, geo.S, eps, geo)
    if not preprocess_feasible(geo.P, geo.S, eps, sets):
        return DecisionResult(False)
    if geo.n == 0:
        order = list(range(geo.k))
        return DecisionResult(True, MatchWitness(order, [Visit(s, 0, 0.0) for s in order]))
    ee = entry_exit_sets(geo.P, geo.S, eps, sets, geo)
    e = first_essential_after(sets)
    res = sweep(geo, _restricted_hops(sets, ee, e, _last_good(sets, ee)))
    if res.final is None:
        return DecisionResult(False)
    path = trace_path(res, geo.n)
    return DecisionResult(True, _expand_witness(geo, sets, path))


def _expand_witness(geo: Arrangement, sets: SegmentPointSets, path) -> MatchWitness:
    groups = []
    for point, seg, _ in path:
        if groups and groups[-1][0] == seg:
            groups[-1][1].append(point)
        else:
            groups.append((seg, [point]))
    q: List[int] = []
    visits: List[Visit] = []
    for seg, pts in groups:
        first, last = pts[0], pts[-1]
        ess = [s for s in sets.S_star(seg) if s != first and s != last]
        ess.sort(key=_order_key(geo, seg))
        seq = [first] + ess + (pts[1:] if len(pts) > 1 else ([first] if ess else []))
        pos = 0.0 if not visits or visits[-1].segment != seg else visits[-1].position
        lo = geo.chord_lo[seg]
        for s in seq:
            pos = max(pos, float(lo[s]))
            q.append(int(s))
            visits.append(Visit(int(s), int(seg), pos))
    return MatchWitness(q, visits)


def check_entry_exit(witness: MatchWitness, ee: EntryExitSets) -> bool:
    """First (last) visit on every segment of the schedule is an entry (exit) point."""
    by_seg = {}
    for v in witness.visits:
        by_seg.setdefault(v.segment, []).append(v.point)
    return all(ee.entry[i, pts[0]] and ee.exit[i, pts[-1]] for i, pts in by_seg.items())


def _bracket_top(P, S) -> float:
    P, S = as_curve(P), as_points(S)
    return float(np.max(np.sqrt(np.sum((P.vertices[:, None] - S[None]) ** 2, axis=-1))))


def restricted_allpoints_optimize(P, S, tol: float = 1e-9):
    """Smallest eps (within ``tol``) for the restricted problem, with witness."""
    P, S = as_curve(P), as_points(S)
    eps = minimize_monotone(
        lambda e: restricted_allpoints_decide(P, S, e).feasible,
        critical_eps_candidates(P, S),
        _bracket_top(P, S),
        tol,
    )
    return eps, restricted_allpoints_decide(P, S, eps).witness


@dataclass
class Certificate:
    eps: float
    factor: float
    optimal: bool

    def to_json(self) -> dict:
        return {"eps": self.eps, "factor": self.factor, "optimal": self.optimal}


def approx_allpoints(P, S, tol: float = 1e-9):
    """All-points curve within three times the optimal Fréchet distance.

    Returns ``(eps_hat, witness, certificate)``. The certificate is upgraded
    to ``optimal`` when at ``eps_hat`` no point lies in more than one
    cylinder, since the restriction is then vacuous.
    """
    P, S = as_curve(P), as_points(S)
    eps, witness = restricted_allpoints_optimize(P, S, tol)
    geo = Arrangement(P, S, eps)
    multi = geo.in_cyl[1 : geo.n + 1].sum(axis=0) > 1 if geo.n > 0 else np.zeros(geo.k, bool)
    optimal = not bool(multi.any()) or eps <= tol
    return eps, witness, Certificate(eps, 1.0 if optimal else 3.0, optimal)


def brute_force_restricted_decide(P, S, eps: float, cap: Optional[int] = None) -> bool:
    """Exhaustive oracle for the restricted problem (every point matched on its
    closest segment at least once)."""
    P, S = as_curve(P), as_points(S)
    check_cap("k", len(S), default_cap(7) if cap is None else cap)
    if eps < 0:
        return False
    closest = closest_segments(P, S) - 1
    if P.n == 0:
        return exhaustive_search(P, S, eps, unique=False, require_all=True) is not None
    return (
        exhaustive_search(P, S, eps, unique=False, require_all=True, closest=list(closest))
        is not None
    )
