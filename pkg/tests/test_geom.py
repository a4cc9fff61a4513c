import math

import numpy as np
import pytest

from curvematch.geom import (
    ParamInterval,
    as_point,
    ball_segment_intersection,
    free_space_cell,
    in_cylinder,
    point_segment_distance,
)


@pytest.mark.parametrize(
    "p, seg, want",
    [((0, 1), ((0, 0), (1, 0)), 1.0), ((2, 0), ((0, 0), (1, 0)), 1.0), ((3, 4), ((0, 0), (0, 0)), 5.0)],
)
def test_point_segment_distance(p, seg, want):
    assert point_segment_distance(p, seg) == pytest.approx(want)


def test_ball_segment_intersection_cases():
    seg = ((0, 0), (10, 0))
    iv = ball_segment_intersection(seg, (5, 1), 1)
    assert iv.lo == pytest.approx(0.5) and iv.hi == pytest.approx(0.5)
    iv = ball_segment_intersection(seg, (5, 0), 1)
    assert (iv.lo, iv.hi) == pytest.approx((0.4, 0.6))
    assert ball_segment_intersection(seg, (0, 2), 1) is None


def test_in_cylinder_boundary_and_caps():
    seg = ((0, 0), (10, 0))
    assert in_cylinder((5, 1), seg, 1)
    assert not in_cylinder((5, 1.001), seg, 1)
    assert in_cylinder((-1, 0), seg, 1)


def test_free_space_cell_examples():
    c = free_space_cell(((0, 0), (1, 0)), ((0, 0), (1, 0)), 0)
    assert (c.left.lo, c.left.hi) == (0, 0)
    assert (c.bottom.lo, c.bottom.hi) == (0, 0)
    assert (c.right.lo, c.right.hi) == (1, 1)
    assert (c.top.lo, c.top.hi) == (1, 1)
    c = free_space_cell(((0, 0), (1, 0)), ((0, 2), (1, 2)), 1)
    assert c.left is c.right is c.bottom is c.top is None
    c = free_space_cell(((0, 0), (2, 0)), ((1, 1), (1, -1)), 1)
    assert c.left.lo == pytest.approx(0.5) and c.left.hi == pytest.approx(0.5)


def test_degenerate_segment_acts_as_ball():
    iv = ball_segment_intersection(((1, 1), (1, 1)), (1, 1.5), 1)
    assert iv is not None
    assert ball_segment_intersection(((1, 1), (1, 1)), (1, 3), 1) is None


def test_rejects_bad_points():
    with pytest.raises(ValueError):
        as_point((1, float("nan")))
    with pytest.raises(ValueError):
        as_point((1, 2, 3))
    with pytest.raises(ValueError):
        ParamInterval(0.6, 0.4)


def test_reversal_maps_parameters(rng):
    for _ in range(200):
        a, b, c = rng.normal(size=(3, 2)) * 3
        eps = float(rng.random() * 3)
        fwd = ball_segment_intersection((a, b), c, eps)
        bwd = ball_segment_intersection((b, a), c, eps)
        assert (fwd is None) == (bwd is None)
        if fwd is not None:
            assert fwd.lo == pytest.approx(1 - bwd.hi, abs=1e-9)
            assert fwd.hi == pytest.approx(1 - bwd.lo, abs=1e-9)


def test_rigid_motion_invariance(rng):
    for _ in range(200):
        a, b, c = rng.normal(size=(3, 2)) * 3
        eps = float(rng.random() * 3)
        th = rng.random() * 2 * math.pi
        R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        t = rng.normal(size=2) * 10
        f = lambda p: R @ p + t
        x = ball_segment_intersection((a, b), c, eps)
        y = ball_segment_intersection((f(a), f(b)), f(c), eps)
        if x is None or y is None:
            # only tangency can flip under rounding
            if (x is None) != (y is None):
                assert abs(point_segment_distance(c, (a, b)) - eps) < 1e-9
            continue
        assert (x.lo, x.hi) == pytest.approx((y.lo, y.hi), abs=1e-9)
