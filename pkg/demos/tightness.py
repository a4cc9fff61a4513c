"""Restricted vs unrestricted all-points matching on the tightness fixture.

Run: python3 demos/tightness.py
"""
import json
import pathlib

import numpy as np

from curvematch.approx import approx_allpoints
from curvematch.precise import brute_force_optimize
from curvematch.svg import render_svg

here = pathlib.Path(__file__).resolve().parent
data = json.loads((here.parent / "tests" / "fixtures" / "tightness.json").read_text())
P = np.array(data["curve"], float)
S = np.array(data["points"], float)

for delta in (0.0, 1e-2, 1e-3):
    S2 = S.copy()
    S2[[1, 2], 1] += delta
    eps_r, w, cert = approx_allpoints(P, S2)
    eps_u, order = brute_force_optimize(P, S2, require_all=True, cap=9)
    print(f"delta={delta:<6g} restricted={eps_r:.4f} unrestricted={eps_u:.4f} ratio={eps_r / eps_u:.4f}")
    print(f"    restricted order   {w.q_vertices}")
    print(f"    unrestricted order {order}")

out = pathlib.Path("tightness.svg")
out.write_text(render_svg(P, S, eps=eps_u, witness=S[order]))
print("wrote", out)
