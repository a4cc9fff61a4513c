"""Imprecise points modelled as line segments, and the discrete matching question.

For the discrete problem only the vertices of ``P`` matter: a realization
works iff every eps-ball around a vertex of ``P`` holds a realized point. So
each region reduces to the finitely many ball-membership masks it can
realize, and the solver searches over those masks instead of positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import check_cap, default_cap
from .frechet import as_curve
from .geom import SQ_TOL, as_point, ball_segment_chords

__all__ = [
    "ImpreciseRegion",
    "Realization",
    "region_ball_patterns",
    "discrete_cipsm_nonunique_decide",
    "realize",
    "as_regions",
]


@dataclass(frozen=True)
class ImpreciseRegion:
    """Segment region ``a``-``b``; ``a == b`` is a precise point."""

    a: Tuple[float, float]
    b: Tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(x) for x in as_point(self.a)))
        object.__setattr__(self, "b", tuple(float(x) for x in as_point(self.b)))

    def at(self, u: float) -> np.ndarray:
        a, b = np.array(self.a), np.array(self.b)
        return a + u * (b - a)

    def distance_to(self, p) -> float:
        a, b = np.array(self.a), np.array(self.b)
        d = b - a
        dd = float(d @ d)
        u = 0.0 if dd == 0 else min(1.0, max(0.0, float((as_point(p) - a) @ d) / dd))
        return float(np.hypot(*(a + u * d - p)))


def as_regions(regions) -> List[ImpreciseRegion]:
    out = []
    for r in regions:
        if isinstance(r, ImpreciseRegion):
            out.append(r)
        else:
            a, b = r
            out.append(ImpreciseRegion(tuple(a), tuple(b)))
    return out


@dataclass
class Realization:
    chosen: np.ndarray  # (m, 2)
    parameters: Optional[np.ndarray] = None

    def to_json(self) -> dict:
        out = {"chosen": self.chosen.tolist()}
        if self.parameters is not None:
            out["parameters"] = self.parameters.tolist()
        return out


def realize(regions, parameters: Sequence[float]) -> Realization:
    regions = as_regions(regions)
    t = np.asarray(parameters, dtype=float)
    if t.shape != (len(regions),):
        raise ValueError("need one parameter per region")
    if np.any((t < 0) | (t > 1)):
        raise ValueError("parameters must lie in [0, 1]")
    pts = np.array([r.at(u) for r, u in zip(regions, t)]).reshape(-1, 2)
    return Realization(pts, t)


def _masks(points: np.ndarray, V: np.ndarray, eps: float) -> List[int]:
    d2 = np.sum((points[:, None] - V[None]) ** 2, axis=-1)
    inside = d2 <= eps * eps + SQ_TOL
    weights = [1 << j for j in range(V.shape[0])]
    return [sum(w for w, hit in zip(weights, row) if hit) for row in inside]


def _patterns_with_params(region: ImpreciseRegion, V: np.ndarray, eps: float):
    a, b = np.array(region.a), np.array(region.b)
    if np.array_equal(a, b):
        return [(_masks(a[None], V, eps)[0], a, 0.0)]
    lo, hi, hit = ball_segment_chords(a, b - a, V, eps)
    cuts = np.unique(np.concatenate([[0.0, 1.0], lo[hit], hi[hit]]))
    # alternate breakpoints and the open gaps between them
    spans = []
    for i, u in enumerate(cuts):
        spans.append((u, u))
        if i + 1 < len(cuts):
            spans.append((u, cuts[i + 1]))
    probes = np.array([0.5 * (x + y) for x, y in spans])
    masks = _masks(a[None] + probes[:, None] * (b - a)[None], V, eps)
    merged: List[list] = []
    for (x, y), m in zip(spans, masks):
        if merged and merged[-1][2] == m:
            merged[-1][1] = y
        else:
            merged.append([x, y, m])
    out = []
    for x, y, m in merged:
        u = 0.5 * (x + y)
        out.append((m, a + u * (b - a), float(u)))
    return out


def region_ball_patterns(region, P, eps: float) -> List[Tuple[int, np.ndarray]]:
    """Distinct ball-membership masks along ``region`` with a representative each.

    Bit ``j`` of a mask stands for the ball around vertex ``j`` (0-based) of
    ``P``. Representatives are midpoints of maximal pieces with constant
    membership, or the piece itself when it is a single parameter.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if not isinstance(region, ImpreciseRegion):
        region = as_regions([region])[0]
    V = as_curve(P).vertices
    return [(m, p) for m, p, _ in _patterns_with_params(region, V, eps)]


def discrete_cipsm_nonunique_decide(
    P, regions, eps: float, all_points: bool = False, cap: Optional[int] = None
) -> Tuple[bool, Optional[Realization]]:
    """Is there a realization whose points hit every vertex ball of ``P``?

    With ``all_points`` every realized point must also lie in some vertex
    ball. Returns ``(feasible, realization)``; the realization is None when
    infeasible.

    The search repeatedly takes the uncovered ball with the fewest regions
    able to reach it and branches over those regions' patterns containing
    it; a ball reachable by one region only is therefore forced.
    """
    regions = as_regions(regions)
    check_cap("regions", len(regions), default_cap(24) if cap is None else cap)
    if eps < 0:
        return False, None
    V = as_curve(P).vertices
    full = (1 << len(V)) - 1
    options = []
    for r in regions:
        pats = _patterns_with_params(r, V, eps)
        if all_points:
            pats = [p for p in pats if p[0]]
            if not pats:
                return False, None
        # a pattern whose mask is contained in another's is never needed
        keep = [p for p in pats if not any(q[0] != p[0] and q[0] & p[0] == p[0] for q in pats)]
        options.append(keep)
    reach = [0] * len(V)
    for ri, pats in enumerate(options):
        for m, _, _ in pats:
            for j in range(len(V)):
                if m >> j & 1:
                    reach[j] |= 1 << ri
    if any(r == 0 for r in reach):
        return False, None

    choice: dict = {}
    failed = set()

    def solve(covered: int, free: int) -> bool:
        if covered == full:
            return True
        key = (covered, free)
        if key in failed:
            return False
        best_j, best_c = -1, None
        for j in range(len(V)):
            if covered >> j & 1:
                continue
            c = reach[j] & free
            if c == 0:
                failed.add(key)
                return False
            if best_c is None or bin(c).count("1") < bin(best_c).count("1"):
                best_j, best_c = j, c
        ri = 0
        c = best_c
        while c:
            if c & 1:
                for pi, (m, _, _) in enumerate(options[ri]):
                    if m >> best_j & 1:
                        choice[ri] = pi
                        if solve(covered | m, free & ~(1 << ri)):
                            return True
                        del choice[ri]
            c >>= 1
            ri += 1
        failed.add(key)
        return False

    if not solve(0, (1 << len(regions)) - 1):
        return False, None
    pts, params = [], []
    for ri, pats in enumerate(options):
        _, p, u = pats[choice.get(ri, 0)]
        pts.append(p)
        params.append(u)
    return True, Realization(np.array(pts).reshape(-1, 2), np.array(params))
