"""JSON output with fixed float formatting and sorted keys.

Floats are written with 17 significant digits so that they read back to the
same double.  Non-finite floats become ``null``.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

__all__ = ["dumps", "write", "to_plain"]


def to_plain(obj):
    """Convert numpy values, tuples and objects with ``to_dict`` to plain JSON types."""
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _emit(obj, indent, level, out):
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + pad if indent else ", "
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{" + pad)
        for k, key in enumerate(sorted(obj)):
            if k:
                out.append(sep)
            out.append(json.dumps(key) + ": ")
            _emit(obj[key], indent, level + 1, out)
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[" + pad)
        for k, v in enumerate(obj):
            if k:
                out.append(sep)
            _emit(v, indent, level + 1, out)
        out.append(end + "]")
    elif isinstance(obj, float):
        out.append(_float(obj))
    else:
        out.append(json.dumps(obj))


def dumps(obj, indent: int = 2) -> str:
    out = []
    _emit(to_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def write(obj, path=None, stream=None, indent: int = 2):
    text = dumps(obj, indent)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    if stream is not None:
        stream.write(text)
    return text
