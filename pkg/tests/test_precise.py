import math

import numpy as np
import pytest

from conftest import random_instance, eps_near_critical, tight_instance
from curvematch.errors import InstanceTooLargeError
from curvematch.frechet import continuous_frechet_decide
from curvematch.precise import (
    Arrangement,
    brute_force_allpoints_decide,
    brute_force_optimize,
    brute_force_subset_decide,
    continuous_subset_decide,
    continuous_subset_optimize,
    critical_eps_candidates,
    discrete_allpoints_decide,
    discrete_subset_decide,
    exhaustive_search,
    reachability_table,
)


def test_discrete_subset_examples():
    P = [(0, 0), (4, 0), (8, 0)]
    assert discrete_subset_decide(P, P, 0)
    assert not discrete_subset_decide([(0, 0), (10, 0)], [(0, 0)], 1)
    r = discrete_subset_decide(P, [(0, 1), (4, -1), (8, 1)], 1)
    assert r and r.witness.q_vertices == [0, 1, 2]


def test_discrete_allpoints_examples():
    P = [(0, 0), (4, 0)]
    assert discrete_allpoints_decide(P, P, 0)
    assert not discrete_allpoints_decide([(0, 0), (10, 0)], [(0, 0), (5, 0)], 1)
    r = discrete_allpoints_decide(P, [(0, 1), (1, 0), (4, 1)], 1.5)
    assert r and r.witness.q_vertices == [0, 1, 2]


def test_reachability_examples():
    r = reachability_table([(0, 0), (10, 0)], [(2, 0), (8, 0)], 1)
    assert r[1, 0, 1] == 1
    r = reachability_table([(0, 0), (10, 0)], [(2, 0), (2, 5)], 1)
    assert r[1, 0, 1] == 0
    # the edge (0,1)->(5,2) passes the corner (5,0) at distance 10/sqrt(26)
    P, S = [(0, 0), (5, 0), (5, 5)], [(0, 1), (5, 2)]
    assert reachability_table(P, S, 1.2)[1, 0, 1] == 0
    assert reachability_table(P, S, 10 / math.sqrt(26) - 1e-6)[1, 0, 1] == 0
    assert reachability_table(P, S, 10 / math.sqrt(26) + 1e-6)[1, 0, 1] == 2


def test_continuous_subset_examples():
    P = [(0, 0), (3, 1), (5, 0)]
    r = continuous_subset_decide(P, P, 0)
    assert r and r.witness.q_vertices == [0, 1, 2]
    assert not continuous_subset_decide(P, [(9, 9), (5, 0)], 1)
    r = continuous_subset_decide([(0, 0), (10, 0)], [(0, 1), (5, 1), (10, 1)], 1)
    assert r and r.witness.q_vertices[0] == 0 and r.witness.q_vertices[-1] == 2


def test_optimize_examples():
    P = [(0, 0), (3, 1), (5, 0)]
    eps, _ = continuous_subset_optimize(P, P, 1e-9)
    assert eps <= 1e-9
    eps, w = continuous_subset_optimize([(0, 0), (10, 0)], [(5, 3)], 1e-9)
    assert eps == pytest.approx(math.sqrt(34), abs=1e-9)
    P, S = tight_instance(0.0)
    eps, _ = continuous_subset_optimize(P, S, 1e-9)
    assert eps == pytest.approx(1.0, abs=1e-8)


def test_candidates_examples():
    P = [(0, 0), (3, 1), (5, 0)]
    assert 0.0 in critical_eps_candidates(P, P)
    c = critical_eps_candidates([(0, 0), (10, 0)], [(5, 3)])
    assert np.isclose(c, 3).any() and np.isclose(c, math.sqrt(34)).any()
    c = critical_eps_candidates([(0, 0), (10, 0)], [(2, 1), (6, 1)])
    assert np.isclose(c, math.sqrt(5)).any()


def test_bruteforce_examples():
    P = [(0, 0), (4, 0), (0, 0)]
    S = [(0, 0), (4, 0)]
    assert brute_force_subset_decide(P, S, 0.5, unique=False)
    assert not brute_force_subset_decide(P, S, 0.5, unique=True)
    assert brute_force_allpoints_decide([(0, 0), (1, 1)], [(0, 0), (1, 1)], 0, unique=True)
    assert not brute_force_allpoints_decide([(0, 0), (1, 1)], [(0, 0), (1, 1), (9, 9)], 1)


def test_caps_raise(monkeypatch):
    S = np.zeros((10, 2))
    with pytest.raises(InstanceTooLargeError):
        brute_force_subset_decide([(0, 0), (1, 0)], S, 1)
    monkeypatch.setenv("CURVE_MATCH_CAP", "20")
    assert brute_force_subset_decide([(0, 0), (0, 0)], S, 1)


def test_oracle_equivalence_and_witnesses(rng):
    for _ in range(150):
        P, S = random_instance(rng)
        e = eps_near_critical(rng, critical_eps_candidates(P, S))
        a = continuous_subset_decide(P, S, e)
        assert a.feasible == brute_force_subset_decide(P, S, e)
        if a.feasible:
            Q = np.asarray(S)[a.witness.q_vertices]
            assert continuous_frechet_decide(P, Q, e * (1 + 1e-9) + 1e-9)
            segs = [v.segment for v in a.witness.visits]
            assert segs == sorted(segs)


def test_reach_table_entries_have_witnesses(rng):
    # r[i][s][t] = j: the edge s->t can be matched from the stored position on P_i into P_j
    for _ in range(40):
        P, S = random_instance(rng, 4, 4)
        e = eps_near_critical(rng, critical_eps_candidates(P, S), 0.4)
        geo = Arrangement(P, S, e)
        r = reachability_table(geo, None, e)
        n, k = r.n, len(S)
        for i in range(1, n + 1):
            for s in range(k):
                for t in range(k):
                    j = r[i, s, t]
                    if j == 0:
                        continue
                    assert j >= i
                    start = P[i - 1] + r.positions[i, s] * (P[i] - P[i - 1])
                    a, b = P[j - 1], P[j]
                    ok = False
                    lo, hi = geo.chord_lo[j, t], geo.chord_hi[j, t]
                    grid = np.concatenate([np.linspace(0, 1, 201), [lo, hi, r.positions[i, s]]])
                    for u in grid:
                        end = a + u * (b - a)
                        if j == i and u < r.positions[i, s] - 1e-12:
                            continue
                        sub = [start] + [P[m] for m in range(i, j)] + [end]
                        if continuous_frechet_decide(sub, [S[s], S[t]], e * (1 + 1e-6) + 1e-6):
                            ok = True
                            break
                    assert ok, (i, s, t, j)


def test_decisions_monotone(rng):
    for _ in range(60):
        P, S = random_instance(rng, 4, 4)
        c = critical_eps_candidates(P, S)
        es = sorted(rng.choice(c, 3))
        for fn in (continuous_subset_decide, discrete_subset_decide, discrete_allpoints_decide):
            res = [bool(fn(P, S, e)) for e in es]
            assert res == sorted(res)


def test_unbounded_length_agrees_on_tiny(rng):
    for _ in range(60):
        P, S = random_instance(rng, 3, 3)
        e = eps_near_critical(rng, critical_eps_candidates(P, S))
        capped = exhaustive_search(P, S, e, unique=False, require_all=True) is not None
        longer = exhaustive_search(P, S, e, unique=False, require_all=True, max_len=50) is not None
        assert capped == longer


def test_brute_force_optimize_on_fixture():
    P, S = tight_instance(0.0)
    eps, order = brute_force_optimize(P, S, require_all=True, cap=9)
    assert eps == pytest.approx(1.0, abs=1e-8)
    assert sorted(set(order)) == list(range(9))
