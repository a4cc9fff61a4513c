import itertools

import numpy as np
import pytest

from curvematch.errors import InstanceTooLargeError
from curvematch.imprecise import (
    ImpreciseRegion,
    discrete_cipsm_nonunique_decide,
    realize,
    region_ball_patterns,
)
from curvematch.precise import discrete_allpoints_decide, discrete_subset_decide


def test_patterns_examples():
    P = [(0, 0), (4, 0)]
    pats = region_ball_patterns(ImpreciseRegion((10, 10), (12, 10)), P, 1)
    assert [m for m, _ in pats] == [0]
    pats = region_ball_patterns(ImpreciseRegion((4, 0), (4, 0)), P, 1)
    assert [m for m, _ in pats] == [0b10]
    pats = region_ball_patterns(((0, 0), (4, 0)), P, 1)
    assert [m for m, _ in pats] == [0b01, 0, 0b10]
    assert pats[1][1].tolist() == [2.0, 0.0]


def test_realize_examples():
    regs = [((0, 0), (2, 0)), ((1, 1), (3, 3))]
    r = realize(regs, [0.0, 1.0])
    assert r.chosen.tolist() == [[0, 0], [3, 3]]
    assert realize([((0, 0), (2, 0))], [0.5]).chosen.tolist() == [[1, 0]]
    with pytest.raises(ValueError):
        realize(regs, [0.0, 1.5])


def test_decide_examples():
    P = [(0, 0), (3, 1), (5, 0)]
    ok, real = discrete_cipsm_nonunique_decide(P, [(v, v) for v in P], 0)
    assert ok
    ok, real = discrete_cipsm_nonunique_decide(P, [((0, 0), (3, 1))], 0.5)
    assert not ok and real is None


def test_cap(monkeypatch):
    regs = [((0, 0), (1, 0))] * 25
    with pytest.raises(InstanceTooLargeError):
        discrete_cipsm_nonunique_decide([(0, 0), (1, 0)], regs, 1)
    monkeypatch.setenv("CURVE_MATCH_CAP", "30")
    assert discrete_cipsm_nonunique_decide([(0, 0), (1, 0)], regs, 1)[0]


def _random_case(rng):
    n = int(rng.integers(1, 5))
    P = rng.random((n + 1, 2)) * 5
    m = int(rng.integers(1, 5))
    regs = []
    for _ in range(m):
        a = P[rng.integers(0, n + 1)] + rng.normal(0, 1, 2)
        b = a + rng.normal(0, 2, 2)
        regs.append((tuple(a), tuple(b)))
    return P, regs, float(rng.random() * 1.5 + 0.2)


def _product_enumeration(P, regs, eps, all_points):
    full = (1 << len(P)) - 1
    choices = [[m for m, _ in region_ball_patterns(r, P, eps)] for r in regs]
    for pick in itertools.product(*choices):
        if all_points and not all(pick):
            continue
        acc = 0
        for m in pick:
            acc |= m
        if acc == full:
            return True
    return False


@pytest.mark.parametrize("all_points", [False, True])
def test_agrees_with_product_enumeration_and_is_sound(rng, all_points):
    for _ in range(300):
        P, regs, eps = _random_case(rng)
        ok, real = discrete_cipsm_nonunique_decide(P, regs, eps, all_points=all_points)
        assert ok == _product_enumeration(P, regs, eps, all_points)
        if ok:
            assert discrete_subset_decide(P, real.chosen, eps)
            if all_points:
                assert discrete_allpoints_decide(P, real.chosen, eps)
            for r, u, c in zip(regs, real.parameters, real.chosen):
                assert ImpreciseRegion(*r).distance_to(c) < 1e-9
                assert 0 <= u <= 1


def test_patterns_cover_dense_samples(rng):
    for _ in range(100):
        P, regs, eps = _random_case(rng)
        V = np.asarray(P)
        for r in regs:
            masks = {m for m, _ in region_ball_patterns(r, P, eps)}
            reg = ImpreciseRegion(*r)
            for u in np.linspace(0, 1, 1000):
                p = reg.at(u)
                inside = np.sum((V - p) ** 2, axis=1) <= eps * eps + 1e-12
                assert sum(1 << j for j in np.flatnonzero(inside)) in masks


def test_monotone_in_eps(rng):
    for _ in range(100):
        P, regs, eps = _random_case(rng)
        res = [discrete_cipsm_nonunique_decide(P, regs, e)[0] for e in (eps * 0.7, eps, eps * 1.4)]
        assert res == sorted(res)
