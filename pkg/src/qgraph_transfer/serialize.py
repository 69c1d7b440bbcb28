"""Deterministic JSON rendering of reports (fixed field order, 15 significant digits)."""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction

import numpy as np

from .quadratic import QuadraticNumber

SIG_DIGITS = 15


def fmt_float(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x}")
    y = float(f"{x:.{SIG_DIGITS}g}")
    return 0.0 if y == 0 else y


def quadratic_to_json(q: QuadraticNumber) -> dict:
    out = {"a": _exact(q.a), "b": _exact(q.b), "D": q.D}
    out["value"] = fmt_float(float(q))
    out["text"] = str(q)
    return out


def _exact(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": fmt_float(obj.real), "im": fmt_float(obj.imag)}
    if isinstance(obj, Fraction):
        return _exact(obj)
    if isinstance(obj, QuadraticNumber):
        return quadratic_to_json(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, ensure_ascii=True) + "\n"
