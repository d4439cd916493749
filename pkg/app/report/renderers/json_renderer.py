import json
import math
from typing import Any

NUMBER_FORMAT = ".17g"


def normalize_zero(v: float) -> float:
    # -0.0 + 0.0 == +0.0
    return v + 0.0


def format_number(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    return format(normalize_zero(float(v)), NUMBER_FORMAT)


def to_json_text(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits; NaN and infinities become null.

    The stdlib encoder offers no hook for float formatting, so containers are
    walked here and scalars delegated to json.dumps.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {to_json_text(v, indent, _level + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{to_json_text(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):
        # numpy scalar
        return to_json_text(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(payload: Any) -> bytes:
    return (to_json_text(payload) + "\n").encode("utf-8")
