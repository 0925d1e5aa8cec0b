"""Scheme files, report envelopes and CSV output."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import __version__
from .errors import InvalidField, InvalidScheme
from .exact_reals import FieldElement, RealField
from .scheme import Scheme, WindowKind


def _element_json(x: FieldElement) -> list[str]:
    return x.coord_strings()


def _element(K: RealField, v: Any) -> FieldElement:
    if isinstance(v, list):
        try:
            return K.element([Fraction(str(c)) for c in v])
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidScheme(f"bad coordinate in {v!r}") from exc
    if isinstance(v, (int, str)):
        return K.rational(Fraction(str(v)))
    raise InvalidScheme(f"field elements are coordinate lists of 'p/q' strings, got {v!r}")


def scheme_to_json(scheme: Scheme) -> dict:
    out = {
        "k": scheme.k,
        "d": scheme.d,
        "field": scheme.field.describe(),
        "forms": [[_element_json(a) for a in row] for row in scheme.forms],
        "window": scheme.window.value,
        "shift": {"s1": [_element_json(v) for v in scheme.s1],
                  "s2": [_element_json(v) for v in scheme.s2]},
        "flags": {"inexact": scheme.inexact},
    }
    if scheme.name:
        out["name"] = scheme.name
    return out


def dumps_scheme(scheme: Scheme) -> str:
    return json.dumps(scheme_to_json(scheme), indent=2) + "\n"


def scheme_from_json(doc: dict) -> Scheme:
    if not isinstance(doc, dict):
        raise InvalidScheme("scheme file must be a JSON object")
    for key in ("k", "d", "field", "forms"):
        if key not in doc:
            raise InvalidScheme(f"missing key {key!r}")
    fd = doc["field"]
    if not isinstance(fd, dict) or "minpoly" not in fd:
        raise InvalidField("field needs a minpoly")
    K = RealField([int(c) for c in fd["minpoly"]], fd.get("root_hint"))
    k, d = int(doc["k"]), int(doc["d"])
    forms = doc["forms"]
    if not isinstance(forms, list) or any(not isinstance(row, list) for row in forms):
        raise InvalidScheme("forms must be a list of rows")
    rows = tuple(tuple(_element(K, a) for a in row) for row in forms)
    shift = doc.get("shift") or {}
    s1 = shift.get("s1")
    s2 = shift.get("s2")
    s1 = tuple(_element(K, v) for v in s1) if s1 is not None else None
    s2 = tuple(_element(K, v) for v in s2) if s2 is not None else None
    try:
        window = WindowKind(doc.get("window", "cubical"))
    except ValueError as exc:
        raise InvalidScheme(f"unknown window {doc.get('window')!r}") from exc
    flags = doc.get("flags") or {}
    return Scheme(k, d, K, rows, window, s1, s2, bool(flags.get("inexact", False)), doc.get("name", ""))


def loads_scheme(text: str) -> Scheme:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidScheme(f"not valid JSON: {exc}") from exc
    return scheme_from_json(doc)


def scheme_hash(scheme: Scheme) -> str:
    return hashlib.sha256(dumps_scheme(scheme).encode()).hexdigest()[:16]


def report(scheme: Scheme | None, command: str, params: dict, result: Any) -> dict:
    """Envelope carrying provenance for every JSON report."""
    return {"tool": "cutproject", "version": __version__, "command": command,
            "scheme_hash": scheme_hash(scheme) if scheme is not None else None,
            "params": params, "result": result}


def dumps_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, default=_default) + "\n"


def _default(obj):
    if isinstance(obj, FieldElement):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "item"):
        return obj.item()
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()
