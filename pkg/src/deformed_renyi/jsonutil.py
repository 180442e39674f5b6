"""Strict-JSON helpers: non-finite floats become the strings "inf"/"-inf"/"nan"."""

from __future__ import annotations

import math


def jsonable_float(x):
    x = float(x)
    if math.isfinite(x):
        return x
    if math.isnan(x):
        return "nan"
    return "inf" if x > 0 else "-inf"


def jsonable_floats(values):
    return [jsonable_float(v) for v in values]
