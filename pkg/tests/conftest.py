import pathlib

import numpy as np
import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def random_instance(rng, n_max=5, k_max=5, box=6.0):
    """Curve with 1..n_max segments and 1..k_max points, mostly near its vertices."""
    n = int(rng.integers(1, n_max + 1))
    k = int(rng.integers(1, k_max + 1))
    P = rng.random((n + 1, 2)) * box
    if rng.random() < 0.7:
        S = P[rng.integers(0, n + 1, k)] + rng.normal(0, 1, (k, 2))
    else:
        S = rng.random((k, 2)) * box
    return P, S


def eps_near_critical(rng, cands, lower_fraction=0.0):
    cands = cands[int(len(cands) * lower_fraction):]
    e = float(rng.choice(cands))
    return e * (1 + float(rng.choice([-1e-6, 0.0, 1e-6])))


def tight_instance(delta):
    """The tightness fixture with its two middle points lifted by ``delta``."""
    import json

    data = json.loads((FIXTURES / "tightness.json").read_text())
    P = np.array(data["curve"], float)
    S = np.array(data["points"], float)
    S[1, 1] += delta
    S[2, 1] += delta
    return P, S


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
