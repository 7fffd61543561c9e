"""Stable JSON serialization for CLI reports.

Floats are written with 17 significant digits, which round-trips every
double, and always carry a decimal point or exponent so they read back as
floats. Dumping, loading and dumping again is byte-identical.
"""

from __future__ import annotations

import json
import math
from typing import Any

from . import __version__


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = "%.17g" % (x + 0.0)
    if "." not in s and "e" not in s:
        s += ".0"
    return s


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(int(obj))
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(str(k), ensure_ascii=False) + ": " + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # keep short scalar lists (subsets, [re, im] pairs) on one line
        if all(x is None or isinstance(x, (int, float, bool)) for x in obj):
            return "[" + ", ".join(_encode(x, indent, level + 1) for x in obj) + "]"
        return "[" + pad + ("," + pad).join(_encode(x, indent, level + 1) for x in obj) + end + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return _encode(obj.item(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return _encode(obj, indent, 0)


def make_report(command: str, input_digest: str, payload: dict) -> dict:
    return {
        "command": command,
        "input_digest": input_digest,
        "payload": payload,
        "tool_version": __version__,
    }
