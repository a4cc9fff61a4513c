"""Deterministic SVG drawings of instances and witness curves."""

from __future__ import annotations

from typing import List, Optional

import numpy as np

__all__ = ["render_svg"]


def _f(x: float) -> str:
    s = "%.6g" % float(x)
    return "0" if s == "-0" else s


def render_svg(
    curve,
    points=None,
    regions=None,
    eps: Optional[float] = None,
    witness=None,
    size: int = 640,
) -> str:
    """SVG 1.1 text for a curve, its eps-cylinders, the points or regions, and a witness.

    Parameters
    ----------
    curve : (n, 2) array-like
    points : (k, 2) array-like, optional
    regions : list of ImpreciseRegion, optional
    eps : float, optional
        Cylinder radius; cylinders are drawn dotted when given and positive.
    witness : (m, 2) array-like, optional
        Vertices of the matched curve, drawn as a separate highlighted layer.

    The output depends only on the inputs: numbers are printed with six
    significant digits and elements appear in input order.
    """
    V = np.asarray(curve, float).reshape(-1, 2)
    S = None if points is None else np.asarray(points, float).reshape(-1, 2)
    W = None if witness is None else np.asarray(witness, float).reshape(-1, 2)
    allp = [V]
    if S is not None and len(S):
        allp.append(S)
    if regions:
        allp.append(np.array([r.a for r in regions] + [r.b for r in regions], float))
    if W is not None and len(W):
        allp.append(W)
    pts = np.vstack(allp)
    pad = (eps or 0.0) + 1.0
    lo = pts.min(axis=0) - pad
    hi = pts.max(axis=0) + pad
    span = float(max(hi[0] - lo[0], hi[1] - lo[1]))
    k = size / span

    def xy(p):
        return _f((p[0] - lo[0]) * k), _f((hi[1] - p[1]) * k)

    width = _f((hi[0] - lo[0]) * k)
    height = _f((hi[1] - lo[1]) * k)
    out: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if eps and eps > 0:
        r = _f(eps * k)
        out.append('<g class="cylinders" fill="none" stroke="#888" stroke-width="1" stroke-dasharray="2,3">')
        for a, b in zip(V[:-1], V[1:]):
            d = b - a
            L = float(np.hypot(*d))
            if L == 0:
                continue
            nrm = np.array([-d[1], d[0]]) / L * eps
            for sgn in (1, -1):
                p, q = xy(a + sgn * nrm), xy(b + sgn * nrm)
                out.append(f'<line x1="{p[0]}" y1="{p[1]}" x2="{q[0]}" y2="{q[1]}"/>')
        for v in V:
            c = xy(v)
            out.append(f'<circle cx="{c[0]}" cy="{c[1]}" r="{r}"/>')
        out.append("</g>")
    poly = " ".join(",".join(xy(v)) for v in V)
    out.append(f'<polyline class="curve" points="{poly}" fill="none" stroke="black" stroke-width="2"/>')
    if regions:
        out.append('<g class="regions" stroke="#1f5fbf" stroke-width="3" stroke-linecap="round">')
        for reg in regions:
            p, q = xy(reg.a), xy(reg.b)
            out.append(f'<line x1="{p[0]}" y1="{p[1]}" x2="{q[0]}" y2="{q[1]}"/>')
        out.append("</g>")
    if S is not None and len(S):
        out.append('<g class="points" fill="#1f5fbf">')
        for s in S:
            c = xy(s)
            out.append(f'<circle cx="{c[0]}" cy="{c[1]}" r="4"/>')
        out.append("</g>")
    if W is not None and len(W):
        poly = " ".join(",".join(xy(v)) for v in W)
        out.append(
            f'<polyline class="witness" points="{poly}" fill="none" stroke="#d62728" '
            'stroke-width="2" stroke-opacity="0.8"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
