"""Instance files: strict JSON parsing and canonical emission.

Canonical form is compact JSON with sorted keys, numbers written with 17
significant digits (``%.17g``), and a trailing newline, so parse followed
by emit is a fixed point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .imprecise import ImpreciseRegion

__all__ = [
    "InstanceFile",
    "ParseError",
    "ValidationError",
    "parse_instance",
    "emit_instance",
    "canonical_json",
    "load_instance",
]

_FIELDS = {"curve", "points", "regions", "eps", "annotations"}


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(ValueError):
    def __init__(self, field: str, msg: str):
        super().__init__(f"{field}: {msg}")
        self.field = field


@dataclass
class InstanceFile:
    curve: np.ndarray
    points: Optional[np.ndarray] = None
    regions: Optional[List[ImpreciseRegion]] = None
    eps: Optional[float] = None
    annotations: Optional[List[str]] = None

    def to_json(self) -> dict:
        out = {"curve": self.curve.tolist()}
        if self.points is not None:
            out["points"] = self.points.tolist()
        if self.regions is not None:
            out["regions"] = [{"type": "segment", "a": list(r.a), "b": list(r.b)} for r in self.regions]
        if self.eps is not None:
            out["eps"] = self.eps
        if self.annotations is not None:
            out["annotations"] = list(self.annotations)
        return out


def _no_dupes(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise ValueError(f"duplicate key {k!r}")
        seen[k] = v
    return seen


def _reject_constant(name):
    raise ValueError(f"non-finite number {name}")


def _number(x, field: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(field, "expected a number")
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(field, "number must be finite")
    return x


def _point_list(v, field: str, allow_empty: bool) -> np.ndarray:
    if not isinstance(v, list):
        raise ValidationError(field, "expected a list of [x, y] pairs")
    if not v and not allow_empty:
        raise ValidationError(field, "must not be empty")
    out = []
    for i, p in enumerate(v):
        if not isinstance(p, list) or len(p) != 2:
            raise ValidationError(f"{field}[{i}]", "expected [x, y]")
        out.append([_number(p[0], f"{field}[{i}]"), _number(p[1], f"{field}[{i}]")])
    return np.array(out, dtype=float).reshape(-1, 2)


def _regions(v) -> List[ImpreciseRegion]:
    if not isinstance(v, list):
        raise ValidationError("regions", "expected a list")
    out = []
    for i, r in enumerate(v):
        f = f"regions[{i}]"
        if not isinstance(r, dict) or set(r) != {"type", "a", "b"}:
            raise ValidationError(f, "expected exactly the keys type, a, b")
        if r["type"] != "segment":
            raise ValidationError(f + ".type", "only 'segment' is supported")
        ab = _point_list([r["a"], r["b"]], f, False)
        out.append(ImpreciseRegion(tuple(ab[0]), tuple(ab[1])))
    return out


def parse_instance(text: str) -> InstanceFile:
    """Strictly parse an instance document.

    Raises
    ------
    ParseError
        Malformed JSON, duplicate keys or non-finite constants.
    ValidationError
        Well-formed JSON that breaks the schema; ``.field`` names the culprit.
    """
    try:
        data = json.loads(text, object_pairs_hook=_no_dupes, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    if not isinstance(data, dict):
        raise ValidationError("<root>", "expected an object")
    extra = sorted(set(data) - _FIELDS)
    if extra:
        raise ValidationError(extra[0], "unknown field")
    if "curve" not in data:
        raise ValidationError("curve", "missing")
    curve = _point_list(data["curve"], "curve", False)
    points = _point_list(data["points"], "points", True) if "points" in data else None
    regions = _regions(data["regions"]) if "regions" in data else None
    if points is not None and regions is not None:
        raise ValidationError("regions", "points and regions are mutually exclusive")
    eps = None
    if "eps" in data:
        eps = _number(data["eps"], "eps")
        if eps < 0:
            raise ValidationError("eps", "must be non-negative")
    ann = None
    if "annotations" in data:
        ann = data["annotations"]
        if not isinstance(ann, list) or not all(isinstance(a, str) for a in ann):
            raise ValidationError("annotations", "expected a list of strings")
        n = len(points) if points is not None else len(regions) if regions is not None else 0
        if len(ann) != n:
            raise ValidationError("annotations", f"expected {n} tags, got {len(ann)}")
    return InstanceFile(curve, points, regions, eps, ann)


def _emit(v) -> str:
    if isinstance(v, dict):
        return "{" + ",".join(json.dumps(k) + ":" + _emit(v[k]) for k in sorted(v)) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_emit(x) for x in v) + "]"
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if not math.isfinite(x):
            raise ValueError("cannot emit a non-finite number")
        s = "%.17g" % x
        return "0" if s == "-0" else s
    return json.dumps(v, ensure_ascii=False)


def canonical_json(value) -> str:
    """Compact JSON with sorted keys and ``%.17g`` floats."""
    return _emit(value)


def emit_instance(inst) -> str:
    """Canonical text for an ``InstanceFile`` (or anything with ``to_json``)."""
    data = inst.to_json() if hasattr(inst, "to_json") else inst
    return canonical_json(data) + "\n"


def load_instance(path: str) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
