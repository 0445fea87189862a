"""JSON and CSV output with 17-significant-digit floats."""

from __future__ import annotations

import csv
import io
import json
import math
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

import numpy as np


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _plain(obj: Any) -> Any:
    """Reduce to dict/list/str/int/float/bool/None."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if isinstance(obj, Mapping):
        return {_key(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


def _emit(obj: Any, indent: int, level: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1)) if indent else ""
    end = " " * (indent * level) if indent else ""
    nl = "\n" if indent else ""
    sep = ": "
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(fmt_float(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{" + nl)
        for i, (k, v) in enumerate(obj.items()):
            out.append(pad + json.dumps(k) + sep)
            _emit(v, indent, level + 1, out)
            out.append(("," if i < len(obj) - 1 else "") + nl)
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[" + nl)
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(("," if i < len(obj) - 1 else "") + nl)
        out.append(end + "]")
    else:  # pragma: no cover - _plain guarantees the cases above
        raise TypeError(type(obj))


def dumps(obj: Any, indent: int = 2) -> str:
    """Serialise with every float written as %.17g (non-finite -> null)."""
    out: list[str] = []
    _emit(_plain(obj), indent, 0, out)
    return "".join(out)


def loads(text: str) -> Any:
    return json.loads(text)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()
