"""JSON instance format.

Top-level fields: ``r, t, n, D, b0, b_local, lower, upper, objective`` and
optionally ``relations = {"global": [...], "local": [...]}``. Objective
terms are ``{"kind": "linear", "coeff": c}``, ``{"kind": "pwl", "points":
[[x, y], ...]}`` or ``{"kind": "zero"}``. Integers of magnitude at least
``2**53`` are written as decimal strings so that any JSON reader keeps them
exact.
"""

from __future__ import annotations

import json
from typing import Union

from .core import (
    Bimatrix,
    CombNFoldInstance,
    Linear,
    PiecewiseLinear,
    SeparableObjective,
    Zero,
)
from .errors import InstanceError
from .transform import RelationalInstance

SAFE = 2**53


def encode_int(v: int):
    return str(v) if abs(v) >= SAFE else v


def decode_int(v, what="value") -> int:
    if isinstance(v, bool):
        raise InstanceError(f"{what}: expected an integer, got a boolean")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    if isinstance(v, float) and v.is_integer() and abs(v) < SAFE:
        return int(v)
    raise InstanceError(f"{what}: expected an integer, got {v!r}")


def _ints(values, what):
    if not isinstance(values, list):
        raise InstanceError(f"{what}: expected a list")
    return [decode_int(v, what) for v in values]


def term_to_json(term) -> dict:
    out = term.to_json()
    if out["kind"] == "linear":
        out["coeff"] = encode_int(out["coeff"])
    elif out["kind"] == "pwl":
        out["points"] = [[encode_int(a), encode_int(b)] for a, b in out["points"]]
    return out


def term_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InstanceError(f"objective term must be an object with a kind, got {obj!r}")
    kind = obj["kind"]
    if kind == "zero":
        return Zero()
    if kind == "linear":
        return Linear(decode_int(obj.get("coeff"), "linear coeff"))
    if kind == "pwl":
        pts = obj.get("points")
        if not isinstance(pts, list) or not all(isinstance(p, list) and len(p) == 2 for p in pts):
            raise InstanceError("pwl points must be a list of [x, y] pairs")
        return PiecewiseLinear(tuple((decode_int(a, "pwl x"), decode_int(b, "pwl y"))
                                     for a, b in pts))
    raise InstanceError(f"unknown objective term kind {kind!r}")


def to_json(inst: Union[CombNFoldInstance, RelationalInstance]) -> dict:
    rel = inst if isinstance(inst, RelationalInstance) else RelationalInstance(inst)
    base = rel.base
    out = {
        "r": base.r,
        "t": base.t,
        "n": base.n,
        "D": [[encode_int(v) for v in row] for row in base.D],
        "b0": [encode_int(v) for v in base.b0],
        "b_local": [encode_int(v) for v in base.b_local],
        "lower": [encode_int(v) for v in base.lower],
        "upper": [encode_int(v) for v in base.upper],
        "objective": [term_to_json(f) for f in base.objective.terms],
    }
    if not rel.is_plain:
        out["relations"] = {"global": list(rel.global_relations),
                            "local": list(rel.local_relations)}
    return out


def from_json(doc) -> RelationalInstance:
    """Parse a document; always returns a :class:`RelationalInstance`
    (``is_plain`` tells whether every relation is an equality)."""
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")
    missing = [k for k in ("D", "b0", "b_local", "lower", "upper") if k not in doc]
    if missing:
        raise InstanceError(f"missing fields: {', '.join(missing)}")
    if not isinstance(doc["D"], list) or not doc["D"]:
        raise InstanceError("D must be a non-empty list of rows")
    D = [_ints(row, "D") for row in doc["D"]]
    b_local = _ints(doc["b_local"], "b_local")
    n = decode_int(doc.get("n", len(b_local)), "n")
    t = len(D[0])
    problems = []
    if "r" in doc and decode_int(doc["r"], "r") != len(D):
        problems.append("field r disagrees with the number of rows of D")
    if "t" in doc and decode_int(doc["t"], "t") != t:
        problems.append("field t disagrees with the width of D")
    if len(b_local) != n:
        problems.append(f"RHS length mismatch: b_local has {len(b_local)} entries for n={n}")
    if problems:
        raise InstanceError(problems)
    objective = doc.get("objective")
    if objective is None:
        terms = SeparableObjective.zero(n * t)
    else:
        if not isinstance(objective, list):
            raise InstanceError("objective must be a list of terms")
        terms = SeparableObjective(tuple(term_from_json(o) for o in objective))
    base = CombNFoldInstance(Bimatrix(D), n, _ints(doc["b0"], "b0"), b_local,
                             _ints(doc["lower"], "lower"), _ints(doc["upper"], "upper"), terms)
    relations = doc.get("relations") or {}
    if not isinstance(relations, dict):
        raise InstanceError("relations must be an object with global/local lists")
    return RelationalInstance(base, relations.get("global"), relations.get("local"))


def dumps(inst) -> str:
    return json.dumps(to_json(inst), indent=1)


def loads(text: str) -> RelationalInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"not valid JSON: {exc}") from None
    return from_json(doc)


def load(path) -> RelationalInstance:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(inst, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(inst))
        fh.write("\n")


def report_to_json(report, include_trace=True) -> str:
    doc = report.to_json(include_trace)
    if doc.get("point") is not None:
        doc["point"] = [encode_int(v) for v in doc["point"]]
    if doc.get("objective") is not None:
        doc["objective"] = encode_int(doc["objective"])
    return json.dumps(doc, sort_keys=True)
