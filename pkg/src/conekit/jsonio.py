"""Canonical JSON: sorted keys, integers as numbers, other rationals as "p/q" strings."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any


def rat(x) -> int | str:
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    raise TypeError(f"not an exact rational: {x!r}")


def _encode(obj: Any):
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_encode(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"
