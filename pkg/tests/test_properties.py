import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from curvematch.approx import compute_point_sets, entry_exit_sets, restricted_allpoints_decide, restricted_allpoints_optimize
from curvematch.frechet import continuous_frechet_decide, continuous_frechet_value, discrete_frechet
from curvematch.geom import ball_segment_intersection, free_space_cell, in_cylinder
from curvematch.gadgets import gen_discrete_cipsm_instance, gen_unique_subset_instance
from curvematch.imprecise import discrete_cipsm_nonunique_decide
from curvematch.io import emit_instance, parse_instance
from curvematch.precise import (
    Arrangement,
    brute_force_allpoints_decide,
    brute_force_optimize,
    brute_force_subset_decide,
    continuous_subset_decide,
    continuous_subset_optimize,
)
from curvematch.reductions import CnfFormula

coord = st.floats(-5, 5, allow_nan=False).map(lambda x: round(x, 3))
point = st.tuples(coord, coord)
curve = st.lists(point, min_size=1, max_size=4)
small_set = st.lists(point, min_size=1, max_size=4)
radius = st.floats(0, 4, allow_nan=False)
common = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@common
@given(point, point, point, radius)
def test_cylinder_iff_chord(a, b, p, eps):
    assert in_cylinder(p, (a, b), eps) == (ball_segment_intersection((a, b), p, eps) is not None)


@common
@given(point, point, point, point, radius, radius)
def test_free_space_shrinks_with_eps(a, b, c, d, e1, e2):
    lo_e, hi_e = sorted((e1, e2))
    small = free_space_cell((a, b), (c, d), lo_e)
    big = free_space_cell((a, b), (c, d), hi_e)
    for name in ("left", "right", "bottom", "top"):
        x, y = getattr(small, name), getattr(big, name)
        if x is not None:
            assert y is not None and y.lo <= x.lo + 1e-9 and x.hi <= y.hi + 1e-9


@common
@given(curve, curve, radius)
def test_frechet_symmetric_and_dominated(P, Q, eps):
    assert continuous_frechet_decide(P, Q, eps) == continuous_frechet_decide(Q, P, eps)
    assert discrete_frechet(P, Q) == discrete_frechet(Q, P)
    assert discrete_frechet(P, Q) >= continuous_frechet_value(P, Q, 1e-9) - 1e-9


@common
@given(curve, curve, radius, radius)
def test_frechet_monotone(P, Q, e1, e2):
    lo, hi = sorted((e1, e2))
    if continuous_frechet_decide(P, Q, lo):
        assert continuous_frechet_decide(P, Q, hi)


@common
@given(curve, small_set, radius)
def test_subset_sweep_matches_oracle(P, S, eps):
    assert continuous_subset_decide(P, S, eps).feasible == brute_force_subset_decide(P, S, eps)


@common
@given(curve, small_set)
def test_optimize_brackets(P, S):
    tol = 1e-6
    eps, _ = continuous_subset_optimize(P, S, tol)
    assert continuous_subset_decide(P, S, eps)
    assert eps < tol or not continuous_subset_decide(P, S, eps - tol)


@common
@given(curve, small_set, radius)
def test_point_sets_partition(P, S, eps):
    geo = Arrangement(P, S, eps)
    sets = compute_point_sets(P, S, eps, geo)
    if len(P) > 1:
        # every point has exactly one closest segment
        assert (sets.essential[1:-1].sum(axis=0) == 1).all()
    ee = entry_exit_sets(P, S, eps, sets, geo)
    for i in range(1, sets.n + 1):
        if not sets.essential[i].any():
            assert ee.entry_points(i) == ee.exit_points(i) == sets.S(i)
    # a point inside any cylinder is inside the cylinder of its closest segment
    covered = sets.members[1 : sets.n + 1].any(axis=0)
    for i in range(1, sets.n + 1):
        assert not (sets.essential[i] & covered & ~sets.members[i]).any()


@common
@given(curve, st.lists(point, min_size=1, max_size=3), radius)
def test_restricted_implies_unrestricted(P, S, eps):
    if restricted_allpoints_decide(P, S, eps):
        assert brute_force_allpoints_decide(P, S, eps)


@settings(max_examples=25, deadline=None)
@given(st.lists(point, min_size=2, max_size=3), st.lists(point, min_size=1, max_size=3))
def test_three_approximation(P, S):
    tol = 1e-9
    eps_r, _ = restricted_allpoints_optimize(P, S, tol)
    eps_u, _ = brute_force_optimize(P, S, require_all=True, tol=tol)
    assert eps_r <= 3 * eps_u + 3 * tol


segment = st.tuples(point, point)


@common
@given(curve, st.lists(segment, min_size=1, max_size=4), radius, radius)
def test_imprecise_monotone(P, regs, e1, e2):
    lo, hi = sorted((e1, e2))
    if discrete_cipsm_nonunique_decide(P, regs, lo)[0]:
        assert discrete_cipsm_nonunique_decide(P, regs, hi)[0]


literal = st.tuples(st.integers(0, 1), st.booleans())


@st.composite
def relaxed_formula(draw):
    clauses = draw(st.lists(st.lists(literal, min_size=1, max_size=3), min_size=1, max_size=3))
    occ = {}
    for c in clauses:
        for l in c:
            occ[l] = occ.get(l, 0) + 1
    assume(all(v <= 2 for v in occ.values()))
    return CnfFormula(2, clauses)


@settings(max_examples=30, deadline=None)
@given(relaxed_formula(), st.floats(0.1, 50))
def test_generators_scale_equivariant(f, s):
    for gen in (gen_unique_subset_instance, gen_discrete_cipsm_instance):
        a = gen(f, s, strict=False)
        b = gen(f, 1.0, strict=False).scaled(s)
        assert np.allclose(a.curve.vertices, b.curve.vertices)
        assert a.eps == b.eps == s


@settings(max_examples=30, deadline=None)
@given(relaxed_formula())
def test_discrete_encoding_matches_sat(f):
    from curvematch.reductions import sat_bruteforce

    inst = gen_discrete_cipsm_instance(f, strict=False)
    assert discrete_cipsm_nonunique_decide(inst.curve, inst.regions, inst.eps)[0] == sat_bruteforce(f)[0]


@common
@given(curve, st.one_of(st.none(), small_set), st.one_of(st.none(), st.floats(0, 1e6)))
def test_io_roundtrip(P, S, eps):
    doc = {"curve": [list(p) for p in P]}
    if S is not None:
        doc["points"] = [list(p) for p in S]
    if eps is not None:
        doc["eps"] = eps
    import json

    once = emit_instance(parse_instance(json.dumps(doc)))
    assert emit_instance(parse_instance(once)) == once
    back = parse_instance(once)
    assert np.array_equal(back.curve, np.array(P, float).reshape(-1, 2))
