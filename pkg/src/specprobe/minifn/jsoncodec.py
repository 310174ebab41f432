"""JSON encoding for MiniFn values and outcomes.

This is the wire format shared by JSON reports, the HTTP service, and the
subprocess runner protocol. Non-finite floats are encoded as the strings
"NaN", "Inf" and "-Inf" so the payload stays valid JSON everywhere.
"""

from __future__ import annotations

import math
from typing import Any, Optional

from .syntax import (
    BOOL,
    FLOAT,
    INT,
    STR,
    BoolV,
    BudgetExhausted,
    ErrorKind,
    ErrorOutcome,
    FloatV,
    IntV,
    ListV,
    Outcome,
    StrV,
    Type,
    Value,
    ValueOutcome,
    list_of,
)


class CodecError(ValueError):
    pass


def type_to_json(t: Type) -> Any:
    if t.kind == "list":
        return {"list": type_to_json(t.elem) if t.elem is not None else None}
    return t.kind


def type_from_json(data: Any) -> Type:
    if isinstance(data, str):
        try:
            return {"int": INT, "float": FLOAT, "bool": BOOL, "str": STR}[data]
        except KeyError:
            raise CodecError(f"unknown type {data!r}") from None
    if isinstance(data, dict) and "list" in data:
        inner = data["list"]
        return Type("list", type_from_json(inner) if inner is not None else None)
    raise CodecError(f"malformed type: {data!r}")


def _float_to_json(x: float) -> Any:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Inf" if x > 0 else "-Inf"
    return x


def _float_from_json(data: Any) -> float:
    if isinstance(data, str):
        try:
            return {"NaN": math.nan, "Inf": math.inf, "-Inf": -math.inf}[data]
        except KeyError:
            raise CodecError(f"bad float encoding {data!r}") from None
    if isinstance(data, bool) or not isinstance(data, (int, float)):
        raise CodecError(f"bad float encoding {data!r}")
    return float(data)


def value_to_json(v: Value) -> Any:
    if isinstance(v, IntV):
        return {"type": "int", "value": v.n}
    if isinstance(v, FloatV):
        return {"type": "float", "value": _float_to_json(v.x)}
    if isinstance(v, BoolV):
        return {"type": "bool", "value": v.b}
    if isinstance(v, StrV):
        return {"type": "str", "value": v.s}
    if isinstance(v, ListV):
        out: dict = {"type": "list", "value": [value_to_json(it) for it in v.items]}
        if v.elem_type is not None:
            out["elem"] = type_to_json(v.elem_type)
        return out
    raise CodecError(f"not a Value: {v!r}")


def value_from_json(data: Any) -> Value:
    if not isinstance(data, dict) or "type" not in data:
        raise CodecError(f"malformed value: {data!r}")
    kind = data["type"]
    raw = data.get("value")
    if kind == "int":
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise CodecError(f"bad int {raw!r}")
        return IntV(raw)
    if kind == "float":
        return FloatV(_float_from_json(raw))
    if kind == "bool":
        if not isinstance(raw, bool):
            raise CodecError(f"bad bool {raw!r}")
        return BoolV(raw)
    if kind == "str":
        if not isinstance(raw, str):
            raise CodecError(f"bad str {raw!r}")
        return StrV(raw)
    if kind == "list":
        if not isinstance(raw, list):
            raise CodecError(f"bad list {raw!r}")
        elem: Optional[Type] = type_from_json(data["elem"]) if data.get("elem") is not None else None
        return ListV(tuple(value_from_json(it) for it in raw), elem)
    raise CodecError(f"unknown value type {kind!r}")


def outcome_to_json(o: Outcome) -> Any:
    if isinstance(o, ValueOutcome):
        return {"kind": "value", "value": value_to_json(o.value)}
    if isinstance(o, ErrorOutcome):
        return {"kind": "error", "error_kind": o.kind.value, "message": o.message}
    if isinstance(o, BudgetExhausted):
        return {"kind": "timeout"}
    raise CodecError(f"not an Outcome: {o!r}")


def outcome_from_json(data: Any) -> Outcome:
    if not isinstance(data, dict):
        raise CodecError(f"malformed outcome: {data!r}")
    kind = data.get("kind")
    if kind == "value":
        return ValueOutcome(value_from_json(data["value"]))
    if kind == "error":
        try:
            ek = ErrorKind(data.get("error_kind"))
        except ValueError:
            raise CodecError(f"unknown error kind {data.get('error_kind')!r}") from None
        return ErrorOutcome(ek, data.get("message", ""))
    if kind == "timeout":
        return BudgetExhausted()
    raise CodecError(f"unknown outcome kind {kind!r}")
