"""Conversion of results to JSON-ready structures (rationals as ``p/q`` strings)."""

from __future__ import annotations

import dataclasses
import enum
from fractions import Fraction

from .intervals import Interval, IntervalSet, format_interval_set
from .rational import fmt
from .valuation import Valuation


def _camel(name: str) -> str:
    head, *rest = name.split("_")
    return head + "".join(w.capitalize() for w in rest)


def to_json(obj):
    """Recursively turn package objects into JSON-serialisable data."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)) and not isinstance(obj, Fraction):
        return obj
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, IntervalSet):
        return format_interval_set(obj)
    if isinstance(obj, Interval):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Valuation):
        return obj.name or "valuation"
    if dataclasses.is_dataclass(obj):
        return {_camel(f.name): to_json(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(x) for x in obj]
    return str(obj)
