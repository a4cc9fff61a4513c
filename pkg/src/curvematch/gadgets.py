"""Instance generators that encode a CNF formula as a matching problem.

Three encodings are provided:

* ``gen_unique_subset_instance``: a curve and point set that admit a
  vertex-unique subset match iff the formula is satisfiable.
* ``gen_imprecise_subset_instance``: the same layout with points turned into
  segment regions.
* ``gen_discrete_cipsm_instance``: a simple curve and segment regions whose
  realizations hit every vertex ball iff the formula is satisfiable.

All geometry is built at eps = 1 and then scaled, so scaling is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import InvalidFormulaError, UnroutableFormulaError, check_cap, default_cap
from .frechet import Curve
from .geom import point_segment_distance
from .imprecise import ImpreciseRegion
from .reductions import CnfFormula, require_formula, sat_bruteforce

__all__ = [
    "GadgetInstance",
    "gen_unique_subset_instance",
    "gen_imprecise_subset_instance",
    "gen_discrete_cipsm_instance",
    "transfer_chain",
    "audit_points_in_cylinders",
    "audit_literal_boundaries",
    "audit_regions",
    "is_simple",
    "EquivalenceReport",
    "verify_equivalence",
    "VARIANTS",
]

VARIANTS = ("unique-subset", "imprecise-subset", "discrete-cipsm")

# unit-scale layout constants
VALLEY_WIDTH = 24
GAP = 6
CYCLE_SIDE = 6.0
PORT_OFFSET = 1.1


@dataclass
class GadgetInstance:
    curve: Curve
    eps: float
    scale: float
    points: Optional[np.ndarray] = None
    regions: Optional[List[ImpreciseRegion]] = None
    annotations: List[str] = field(default_factory=list)
    # literal point index -> curve segment (0-based) it must touch on the boundary
    literal_segments: Dict[int, int] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)
    vertex_tags: List[str] = field(default_factory=list)
    # per region, the curve vertices whose balls it is meant to reach
    expected_hits: Optional[List[set]] = None

    def scaled(self, factor: float) -> "GadgetInstance":
        pts = None if self.points is None else self.points * factor
        regs = None
        if self.regions is not None:
            regs = [
                ImpreciseRegion(tuple(np.array(r.a) * factor), tuple(np.array(r.b) * factor))
                for r in self.regions
            ]
        return GadgetInstance(
            Curve(self.curve.vertices * factor),
            self.eps * factor,
            self.scale * factor,
            pts,
            regs,
            list(self.annotations),
            dict(self.literal_segments),
            dict(self.counts),
            list(self.vertex_tags),
            None if self.expected_hits is None else [set(e) for e in self.expected_hits],
        )

    def to_json(self) -> dict:
        out = {
            "curve": self.curve.vertices.tolist(),
            "eps": self.eps,
            "annotations": list(self.annotations),
        }
        if self.points is not None:
            out["points"] = self.points.tolist()
        if self.regions is not None:
            out["regions"] = [
                {"type": "segment", "a": list(r.a), "b": list(r.b)} for r in self.regions
            ]
        return out


class _Path:
    """Curve under construction plus its annotated points."""

    def __init__(self, start):
        self.P = [np.array(start, float)]
        self.pts: List[np.ndarray] = []
        self.tags: List[str] = []
        self.pos = self.P[0]
        self.corners = 0
        self.literal_seg: Dict[int, int] = {}

    def point(self, p, tag):
        self.pts.append(np.array(p, float))
        self.tags.append(tag)
        return len(self.pts) - 1

    def vertex(self, V, point=None, tag=None):
        V = np.array(V, float)
        self.P.append(V)
        self.pos = V
        if point is not None:
            self.point(point, tag)

    def corner(self, V, dout, keep=("in", "out"), tag="corner"):
        """Step corner at ``V``: incoming along the current heading, leaving along ``dout``.

        The curve jogs two units before ``V`` and re-joins two units after,
        so a point one unit before ``V`` and one unit after it can both be
        visited in one pass or each used by a separate pass.
        """
        V = np.array(V, float)
        din = V - self.pos
        din /= np.linalg.norm(din)
        dout = np.array(dout, float)
        self.P += [V - 2 * din, V - 2 * din + 2 * dout, V + 2 * dout]
        self.pos = self.P[-1]
        self.corners += 1
        idx = {}
        if "in" in keep:
            idx["in"] = self.point(V - din, tag + ":in")
        if "out" in keep:
            idx["out"] = self.point(V + dout, tag + ":out")
        return idx, din


def _clause_sequence(f: CnfFormula, nv: int):
    """Vertical probe columns visited by the clause coil, in order.

    Each literal occurrence owns one probe column next to a point of its
    variable gadget. Direction 'D' columns are traversed downwards, 'U'
    upwards; the coil alternates D and U and moves right on D->U turns and
    left on U->D turns. Spare columns outside the gadgets fill gaps.
    """
    slots = {}
    for v in range(nv):
        X = v * VALLEY_WIDTH
        slots[(v, True)] = [("in1", "D", X - 1), ("out2", "U", X + 17)]
        slots[(v, False)] = [("out1", "U", X + 2), ("in2", "D", X + 14)]
    used: Dict[Tuple[int, bool], int] = {}
    probes = []
    for c in f.clauses:
        pr = []
        for lit in c:
            k = used.get(lit, 0)
            used[lit] = k + 1
            name, typ, col = slots[lit][k]
            pr.append((typ, col, lit[0], name))
        probes.append(pr)
    free = {"U": nv * VALLEY_WIDTH + 9, "D": -9}

    def spare(t):
        x = free[t]
        free[t] += 3 if t == "U" else -3
        return x

    seq = [("D", spare("D"), "lead", None)]
    for ci, pr in enumerate(probes):
        rem = list(pr)
        while rem:
            need = "U" if seq[-1][0] == "D" else "D"
            last = seq[-1][1]
            pick = next(
                (p for p in rem if p[0] == need and ((p[1] > last) if need == "U" else (p[1] < last))),
                None,
            )
            if pick:
                rem.remove(pick)
                seq.append((need, pick[1], ci, (pick[2], pick[3])))
            else:
                seq.append((need, spare(need), "free", None))
        need = "U" if seq[-1][0] == "D" else "D"
        seq.append((need, spare(need), "sep", None))
    return seq


def _unique_subset_unit(f: CnfFormula):
    nv = f.num_vars
    seq = _clause_sequence(f, nv)
    n_up = sum(1 for s in seq if s[0] == "U")
    T = 5 + GAP * n_up + 4
    path = _Path((0, T))
    literal_idx: Dict[Tuple[int, str], int] = {}
    for v in range(nv):
        X = v * VALLEY_WIDTH
        if v > 0:
            path.vertex((X, T))
        path.point((X + 1, T), "switch")
        a, _ = path.corner((X, 0), (1, 0), tag=f"var{v}:left")
        b, _ = path.corner((X + 16, 0), (0, 1), tag=f"var{v}:right")
        literal_idx[(v, "in1")], literal_idx[(v, "out1")] = a["in"], a["out"]
        literal_idx[(v, "in2")], literal_idx[(v, "out2")] = b["in"], b["out"]
        path.vertex((X + 16, T))
        path.point((X + 15, T), "switch")
    top = T + GAP
    xl = seq[0][1]
    path.vertex((path.pos[0], top), point=(path.pos[0], top), tag="switch")
    path.vertex((xl, top), point=(xl + 1, top), tag="switch")

    # corners of the coil: (column, heading after the corner, owning sequence entry)
    clist = []
    for i, (typ, col, _, _) in enumerate(seq):
        if typ == "D":
            if i > 0:
                clist.append((col, (0, -1), i))
            clist.append((col, (1, 0), i))
        else:
            clist.append((col, (0, 1), i))
            clist.append((col, (-1, 0), i))
    levels = []
    up, down = 5 - GAP, -GAP
    for j, (col, d, _) in enumerate(clist):
        if j % 2 == 0:
            if d == (0, -1) or d == (-1, 0):
                up += GAP
                lvl = up
            else:
                down -= GAP
                lvl = down
        levels.append(lvl)

    # which of the two corner points survive: the clause entry and exit
    # corners keep one point each, so the coil has a single forced track
    # that dead-ends unless some literal point lets it switch
    first_of = {}
    for j, (_, _, i) in enumerate(clist):
        first_of.setdefault(i, j)
    keep = [("in", "out")] * len(clist)
    track = lambda j, w: (j + (0 if w == "in" else 1)) % 2
    forced = track(0, "out")
    keep[0] = ("out",)
    for i, s in enumerate(seq):
        if s[2] != "sep":
            continue
        dead = first_of[i]
        other = 1 - forced
        keep[dead] = tuple(w for w in ("in", "out") if track(dead, w) == other)
        if dead + 1 < len(clist):
            keep[dead + 1] = tuple(w for w in ("in", "out") if track(dead + 1, w) == other)
        forced = other
    clist = clist[:-1]
    din = None
    for j, (col, d, i) in enumerate(clist):
        seg_before = len(path.P) - 1
        kind = seq[i][2]
        tag = "clause" if isinstance(kind, int) else kind
        if isinstance(kind, int):
            tag = f"clause{kind}"
        _, din = path.corner((col, levels[j]), d, keep=keep[j], tag=tag)
        lit = seq[i][3]
        if lit is not None and j == first_of[i] + 1:
            # the segment entering this corner's jog runs along the probe column
            path.literal_seg[literal_idx[lit]] = seg_before
    end = path.pos + np.array(clist[-1][1], float) * GAP
    path.vertex(end, point=end - din, tag="end")
    for (v, name), k in literal_idx.items():
        path.tags[k] = f"literal:x{v}:{'pos' if name in ('in1', 'out2') else 'neg'}:{name}"
    return path, nv


def gen_unique_subset_instance(f: CnfFormula, scale: float = 1.0, strict: bool = True) -> GadgetInstance:
    """Curve and points with a vertex-unique subset match iff ``f`` is satisfiable.

    Each variable is a valley with two step corners; the two ways of
    threading its four corner points are the two truth values. The clause
    coil passes each literal point on the boundary of a probe column, and a
    clause is escapable only through a free literal point.

    Parameters
    ----------
    f : CnfFormula
    scale : float
        Length unit; eps equals ``scale``.
    strict : bool
        Require exactly-twice 3-literal formulas. With False, clauses may
        have 1-3 literals and each literal may occur at most twice.
    """
    require_formula(f, strict)
    if not f.clauses:
        raise InvalidFormulaError("the encodings need at least one clause")
    if scale <= 0:
        raise ValueError("scale must be positive")
    path, nv = _unique_subset_unit(f)
    inst = GadgetInstance(
        Curve(np.array(path.P)),
        1.0,
        1.0,
        points=np.array(path.pts).reshape(-1, 2),
        annotations=path.tags,
        literal_segments=dict(path.literal_seg),
        counts={
            "variables": nv,
            "clauses": len(f.clauses),
            "corners": path.corners,
            "variable_corners": 2 * nv,
            "clause_corners": path.corners - 2 * nv,
            "vertices": len(path.P),
            "points": len(path.pts),
        },
    )
    return inst if scale == 1.0 else inst.scaled(scale)


def _outward(P: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Unit direction from the closest curve point towards ``p``."""
    best, foot = np.inf, None
    for a, b in zip(P[:-1], P[1:]):
        d = b - a
        u = np.clip((p - a) @ d / (d @ d), 0.0, 1.0)
        q = a + u * d
        dist = np.hypot(*(p - q))
        if dist < best:
            best, foot, seg = dist, q, d
    v = p - foot
    if np.hypot(*v) < 1e-12:
        v = np.array([-seg[1], seg[0]])
    return v / np.hypot(*v)


def gen_imprecise_subset_instance(f: CnfFormula, scale: float = 1.0, strict: bool = True) -> GadgetInstance:
    """The unique-subset layout with segment regions instead of points.

    The two points of each variable corner become the endpoints of one
    region; every other point becomes a short segment leaving the curve
    with one endpoint at the original point.
    """
    base = gen_unique_subset_instance(f, 1.0, strict)
    P = base.curve.vertices
    tags = base.annotations
    regions, ann = [], []
    merged = set()
    for k, t in enumerate(tags):
        if k in merged:
            continue
        if t.startswith("literal:") and t.endswith(("in1", "in2")):
            partner = k + 1
            regions.append(ImpreciseRegion(tuple(base.points[k]), tuple(base.points[partner])))
            merged.add(partner)
            ann.append(f"variable-corner:{t.split(':')[1]}:{t.split(':')[-1][-1]}")
            continue
        p = base.points[k]
        regions.append(ImpreciseRegion(tuple(p), tuple(p + 0.5 * _outward(P, p))))
        ann.append(t)
    inst = GadgetInstance(
        Curve(P.copy()),
        1.0,
        1.0,
        regions=regions,
        annotations=ann,
        counts=dict(base.counts, regions=len(regions), merged=len(merged)),
    )
    return inst if scale == 1.0 else inst.scaled(scale)


def _seg_intersect(a, b, c, d) -> bool:
    def orient(p, q, r):
        v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        return 0 if abs(v) < 1e-12 else (1 if v > 0 else -1)

    def on(p, q, r):
        return min(p[0], q[0]) - 1e-12 <= r[0] <= max(p[0], q[0]) + 1e-12 and min(p[1], q[1]) - 1e-12 <= r[1] <= max(p[1], q[1]) + 1e-12

    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return (o1 == 0 and on(a, b, c)) or (o2 == 0 and on(a, b, d)) or (o3 == 0 and on(c, d, a)) or (o4 == 0 and on(c, d, b))


def is_simple(curve) -> bool:
    """No two segments meet except consecutive ones at their shared vertex."""
    V = curve.vertices if isinstance(curve, Curve) else np.asarray(curve, float)
    n = len(V) - 1
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1:
                # consecutive: only a fold back onto the previous segment is bad
                u, w = V[i] - V[i + 1], V[j + 1] - V[j]
                cross = u[0] * w[1] - u[1] * w[0]
                if abs(cross) < 1e-12 and u @ w > 0:
                    return False
                continue
            if _seg_intersect(V[i], V[i + 1], V[j], V[j + 1]):
                return False
    return True


def _discrete_layout(f: CnfFormula):
    nv = f.num_vars
    D = CYCLE_SIDE
    width = 3 * D
    total = max(1, nv) * width
    H = 2 * total + 20
    balls: List[Tuple[np.ndarray, str]] = []
    regions: List[Tuple[np.ndarray, np.ndarray, str]] = []
    port_slots = {}
    expected = []

    def lens(c, h):
        return 0.5 * (np.asarray(c) + np.asarray(h))

    used = f.occurrences()
    for v in range(nv):
        X = v * width
        c = [np.array(p, float) for p in ((X, 0), (X, D), (X + D, D), (X + D, 0))]
        base = len(balls)
        for j, p in enumerate(c):
            balls.append((p, f"cycle:x{v}:{j}"))
        h = {
            ("pos", 0): np.array((X - PORT_OFFSET, D + PORT_OFFSET)),
            ("neg", 0): np.array((X + PORT_OFFSET, D + PORT_OFFSET)),
            ("pos", 1): np.array((X + D - PORT_OFFSET, D + PORT_OFFSET)),
            ("neg", 1): np.array((X + D + PORT_OFFSET, D + PORT_OFFSET)),
        }
        # region j runs from c[j] (false position) to c[j+1] (true position)
        ends = [[c[j], c[(j + 1) % 4]] for j in range(4)]
        ends[0][1] = lens(c[1], h[("pos", 0)])
        ends[1][0] = lens(c[1], h[("neg", 0)])
        ends[1][1] = lens(c[2], h[("pos", 1)])
        ends[2][0] = lens(c[2], h[("neg", 1)])
        for j in range(4):
            regions.append((ends[j][0], ends[j][1], f"cycle:x{v}:{j}"))
            expected.append({base + j, base + (j + 1) % 4})
        n_pos, n_neg = used[(v, True)], used[(v, False)]
        for (pol, k), centre in sorted(h.items()):
            if k < (n_pos if pol == "pos" else n_neg):
                port_slots[(v, pol == "pos", k)] = len(balls)
                balls.append((centre, f"port:x{v}:{pol}:{k}"))
                # the cycle region whose end sits in this port also hits it
                j = {("pos", 0): 0, ("neg", 0): 1, ("pos", 1): 1, ("neg", 1): 2}[(pol, k)]
                expected[len(expected) - 4 + j].add(len(balls) - 1)
    m = len(f.clauses)
    span = max(total, 4.0 * m)
    taken: Dict[Tuple[int, bool], int] = {}
    for ci, clause in enumerate(f.clauses):
        w = np.array((span * (ci + 0.5) / max(m, 1) - 0.5 * width / 3, H))
        wi = len(balls)
        balls.append((w, f"clause:{ci}"))
        for lit in clause:
            k = taken.get(lit, 0)
            taken[lit] = k + 1
            hi = port_slots[(lit[0], lit[1], k)]
            h = balls[hi][0]
            regions.append((h + np.array((0.0, 0.5)), w.copy(), f"chain:x{lit[0]}:{'pos' if lit[1] else 'neg'}:c{ci}"))
            expected.append({hi, wi})
    return balls, regions, expected


def gen_discrete_cipsm_instance(f: CnfFormula, scale: float = 1.0, strict: bool = True) -> GadgetInstance:
    """Simple curve and segment regions: every vertex ball is hit iff ``f`` is satisfiable.

    Each variable is a cycle of four balls joined by four regions, which
    must all sit at their first ends (false) or all at their second ends
    (true). Port balls next to the cycle are hit by the cycle exactly when
    the matching literal is true; otherwise the literal's chain region is
    needed at the port and cannot reach its clause ball. The curve visits
    all balls in lexicographic order, which keeps it simple.
    """
    require_formula(f, strict)
    if not f.clauses:
        raise InvalidFormulaError("the encodings need at least one clause")
    if scale <= 0:
        raise ValueError("scale must be positive")
    balls, regs, expected = _discrete_layout(f)
    order = sorted(range(len(balls)), key=lambda i: (balls[i][0][0], balls[i][0][1]))
    rank = {b: k for k, b in enumerate(order)}
    V = np.array([balls[i][0] for i in order]).reshape(-1, 2)
    if len(V) == 1:
        V = np.vstack([V, V])
    regions = [ImpreciseRegion(tuple(a), tuple(b)) for a, b, _ in regs]
    inst = GadgetInstance(
        Curve(V),
        1.0,
        1.0,
        regions=regions,
        annotations=[t for _, _, t in regs],
        counts={
            "variables": f.num_vars,
            "clauses": len(f.clauses),
            "vertices": len(balls),
            "regions": len(regions),
        },
    )
    inst.vertex_tags = [balls[i][1] for i in order]
    inst.expected_hits = [{rank[b] for b in e} for e in expected]
    problems = audit_regions(inst)
    if problems or not is_simple(inst.curve):
        raise UnroutableFormulaError(
            "layout failed its audit: " + ("; ".join(problems) if problems else "curve not simple")
        )
    return inst if scale == 1.0 else inst.scaled(scale)


def transfer_chain(length: int, with_a: bool = True, scale: float = 1.0) -> GadgetInstance:
    """A row of ``length + 1`` balls with one region between each neighbouring pair.

    The optional point ``a`` is a degenerate region inside the first ball.
    All balls can be hit iff ``a`` is present: without it the first region
    must fall back to the first ball and every later one follows, leaving
    the last ball empty.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    step = 3.0
    V = np.array([(k * step, 0.0) for k in range(length + 1)])
    regions, ann = [], []
    if with_a:
        regions.append(ImpreciseRegion((0.0, 0.0), (0.0, 0.0)))
        ann.append("a")
    for k in range(length):
        regions.append(ImpreciseRegion(tuple(V[k]), tuple(V[k + 1])))
        ann.append(f"transfer:{k}")
    inst = GadgetInstance(Curve(V), 1.0, 1.0, regions=regions, annotations=ann,
                          counts={"vertices": len(V), "regions": len(regions)})
    return inst if scale == 1.0 else inst.scaled(scale)


def audit_points_in_cylinders(inst: GadgetInstance) -> List[int]:
    """Indices of points farther than eps from every curve segment."""
    V = inst.curve.vertices
    bad = []
    for k, p in enumerate(inst.points):
        d = min(point_segment_distance(p, (a, b)) for a, b in zip(V[:-1], V[1:]))
        if d > inst.eps * (1 + 1e-9):
            bad.append(k)
    return bad


def audit_literal_boundaries(inst: GadgetInstance) -> Dict[int, float]:
    """Deviation from eps of each literal point's distance to its probe segment."""
    V = inst.curve.vertices
    out = {}
    for k, s in inst.literal_segments.items():
        d = point_segment_distance(inst.points[k], (V[s], V[s + 1]))
        out[k] = abs(d - inst.eps)
    return out


def audit_regions(inst: GadgetInstance) -> List[str]:
    """Compare the balls each region can reach with the intended ones.

    Only meaningful for instances carrying ``expected_hits`` (the discrete
    encoding); returns a list of human-readable mismatches.
    """
    from .imprecise import region_ball_patterns

    problems = []
    expected = inst.expected_hits
    if expected is None:
        return problems
    for k, (r, want) in enumerate(zip(inst.regions, expected)):
        got = 0
        for m, _ in region_ball_patterns(r, inst.curve, inst.eps):
            got |= m
        got_set = {j for j in range(len(inst.curve.vertices)) if got >> j & 1}
        if got_set != want:
            problems.append(f"region {k} ({inst.annotations[k]}) reaches {sorted(got_set)}, wanted {sorted(want)}")
    return problems


@dataclass
class EquivalenceReport:
    variant: str
    satisfiable: bool
    feasible: Optional[bool]
    assignment: Optional[Tuple[bool, ...]]
    witness: Optional[list]
    instance: GadgetInstance
    audits: Dict[str, bool]

    @property
    def agreement(self) -> Optional[bool]:
        if self.feasible is None:
            return None
        return self.feasible == self.satisfiable and all(self.audits.values())

    def summary(self) -> str:
        if self.feasible is None:
            return "structural audits only: " + ("pass" if all(self.audits.values()) else "FAIL")
        word = "feasible" if self.feasible else "infeasible"
        sat = "SAT" if self.satisfiable else "UNSAT"
        if self.agreement:
            return f"agreement: {word} <=> {sat}"
        return f"counterexample: {word} but {sat}"

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "satisfiable": self.satisfiable,
            "feasible": self.feasible,
            "agreement": self.agreement,
            "report": self.summary(),
            "assignment": None if self.assignment is None else list(self.assignment),
            "witness": self.witness,
            "audits": dict(self.audits),
        }


def verify_equivalence(
    f: CnfFormula, variant: str, strict: bool = False, cap: Optional[int] = None
) -> EquivalenceReport:
    """Generate the ``variant`` encoding of ``f``, solve it exactly and compare with SAT.

    ``cap`` bounds the solver input: points for the unique-subset search,
    regions for the discrete search. The imprecise-subset encoding has no
    exact solver here, so only its structural audits are reported.
    """
    from .imprecise import discrete_cipsm_nonunique_decide
    from .precise import exhaustive_search

    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    sat, assignment = sat_bruteforce(f)
    if variant == "unique-subset":
        inst = gen_unique_subset_instance(f, strict=strict)
        check_cap("points", len(inst.points), default_cap(60) if cap is None else cap)
        dev = audit_literal_boundaries(inst)
        audits = {
            "points_in_cylinders": not audit_points_in_cylinders(inst),
            "literals_on_boundary": all(d <= 1e-9 * inst.scale for d in dev.values()),
        }
        order = exhaustive_search(inst.curve, inst.points, inst.eps, unique=True, require_all=False)
        feasible = order is not None
        witness = order
    elif variant == "discrete-cipsm":
        inst = gen_discrete_cipsm_instance(f, strict=strict)
        audits = {"regions_reach_intended_balls": not audit_regions(inst), "simple_curve": is_simple(inst.curve)}
        feasible, real = discrete_cipsm_nonunique_decide(inst.curve, inst.regions, inst.eps, cap=cap)
        witness = None if real is None else real.chosen.tolist()
    else:
        inst = gen_imprecise_subset_instance(f, strict=strict)
        V = inst.curve.vertices
        near = lambda p: min(point_segment_distance(p, (a, b)) for a, b in zip(V[:-1], V[1:]))
        audits = {
            "regions_touch_cylinders": all(
                near(np.array(r.a)) <= inst.eps * (1 + 1e-9) for r in inst.regions
            )
        }
        feasible, witness = None, None
    return EquivalenceReport(variant, sat, feasible, assignment if sat else None, witness, inst, audits)
