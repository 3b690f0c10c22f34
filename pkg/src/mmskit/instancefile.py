"""On-disk formats: instances and solver results as canonical JSON.

Documents are plain JSON with every rational rendered as a string like
"3" or "5/13", so files stay human-readable and diffable.  The writers
emit a canonical form (fixed key order, two-space indent, reduced
fractions, trailing newline); parsing a canonical document and serializing
it again reproduces the bytes exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import ParseError
from .values import Instance, instance_from_lists
from .allocations import Allocation, RandomizedAllocation


def _rational_str(x: Fraction) -> str:
    return str(Fraction(x))


def _parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        result = Fraction(value)
    elif isinstance(value, str):
        try:
            result = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{where}: invalid rational {value!r} ({exc})") from None
    else:
        raise ParseError(f"{where}: expected a rational string, got {type(value).__name__}")
    if result < 0:
        raise ParseError(f"{where}: negative value {result}")
    return result


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


@dataclass(frozen=True)
class InstanceDocument:
    instance: Instance
    meta: dict | None = None


def serialize_instance(inst: Instance, meta: dict | None = None) -> str:
    doc: dict[str, Any] = {}
    if meta is not None:
        doc["meta"] = meta
    doc["items"] = inst.m
    doc["agents"] = [
        [[_rational_str(x) for x in f.values] for f in v.functions]
        for v in inst.valuations
    ]
    return _dumps(doc)


def parse_instance_document(text: str) -> InstanceDocument:
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    meta = doc.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise ParseError("meta: expected an object")
    if "items" not in doc:
        raise ParseError("top level: missing 'items'")
    m = doc["items"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise ParseError(f"items: expected a non-negative integer, got {m!r}")
    agents = doc.get("agents")
    if not isinstance(agents, list) or not agents:
        raise ParseError("agents: expected a non-empty list")
    parsed = []
    for i, fam in enumerate(agents):
        if not isinstance(fam, list) or not fam:
            raise ParseError(f"agent {i}: expected a non-empty list of functions")
        rows = []
        for k, row in enumerate(fam):
            if not isinstance(row, list):
                raise ParseError(f"agent {i}, function {k}: expected a list")
            if len(row) != m:
                raise ParseError(
                    f"agent {i}, function {k}: {len(row)} entries, expected {m}"
                )
            rows.append(
                [
                    _parse_rational(x, f"agent {i}, function {k}, entry {j}")
                    for j, x in enumerate(row)
                ]
            )
        parsed.append(rows)
    return InstanceDocument(instance=instance_from_lists(parsed), meta=meta)


def parse_instance(text: str) -> Instance:
    return parse_instance_document(text).instance


def load_instance_document(path: str) -> InstanceDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance_document(fh.read())


def _allocation_obj(alloc: Allocation) -> dict:
    return {"owner": list(alloc.owner)}


def _parse_allocation(obj: Any, where: str, m: int | None) -> Allocation:
    if not isinstance(obj, dict) or "owner" not in obj:
        raise ParseError(f"{where}: expected an object with 'owner'")
    owner = obj["owner"]
    if not isinstance(owner, list):
        raise ParseError(f"{where}: 'owner' must be a list")
    for j, i in enumerate(owner):
        if not isinstance(i, int) or isinstance(i, bool) or i < 0:
            raise ParseError(f"{where}: owner of item {j} must be a non-negative integer")
    if m is not None and len(owner) != m:
        raise ParseError(f"{where}: {len(owner)} owners, expected {m}")
    return Allocation(tuple(owner))


def _randomized_obj(rand: RandomizedAllocation) -> dict:
    return {
        "support": [
            {"owner": list(a.owner), "probability": _rational_str(p)}
            for a, p in rand.support
        ]
    }


def _parse_randomized(obj: Any, where: str, m: int | None) -> RandomizedAllocation:
    if not isinstance(obj, dict) or "support" not in obj:
        raise ParseError(f"{where}: expected an object with 'support'")
    support = obj["support"]
    if not isinstance(support, list) or not support:
        raise ParseError(f"{where}: 'support' must be a non-empty list")
    out = []
    for idx, entry in enumerate(support):
        here = f"{where}, outcome {idx}"
        alloc = _parse_allocation(entry, here, m)
        if not isinstance(entry, dict) or "probability" not in entry:
            raise ParseError(f"{here}: missing 'probability'")
        p = _parse_rational(entry["probability"], f"{here}, probability")
        out.append((alloc, p))
    try:
        return RandomizedAllocation(tuple(out))
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None


@dataclass(frozen=True)
class ResultDocument:
    """A solver's output: either a sure allocation or a lottery."""

    algorithm: str
    allocation: Allocation | None = None
    randomized: RandomizedAllocation | None = None
    mms: tuple[Fraction, ...] | None = None
    report: dict | None = None

    @property
    def result(self):
        return self.allocation if self.allocation is not None else self.randomized


def serialize_result(doc: ResultDocument) -> str:
    out: dict[str, Any] = {"algorithm": doc.algorithm}
    if doc.allocation is not None:
        out["allocation"] = _allocation_obj(doc.allocation)
    if doc.randomized is not None:
        out["randomized"] = _randomized_obj(doc.randomized)
    if doc.mms is not None:
        out["mms"] = [_rational_str(x) for x in doc.mms]
    if doc.report is not None:
        out["report"] = doc.report
    return _dumps(out)


def parse_result(text: str, m: int | None = None) -> ResultDocument:
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    algorithm = doc.get("algorithm")
    if algorithm not in ("det", "rand"):
        raise ParseError(f"algorithm: expected 'det' or 'rand', got {algorithm!r}")
    allocation = None
    randomized = None
    if "allocation" in doc:
        allocation = _parse_allocation(doc["allocation"], "allocation", m)
    if "randomized" in doc:
        randomized = _parse_randomized(doc["randomized"], "randomized", m)
    if (allocation is None) == (randomized is None):
        raise ParseError("expected exactly one of 'allocation' or 'randomized'")
    mms = None
    if "mms" in doc:
        if not isinstance(doc["mms"], list):
            raise ParseError("mms: expected a list")
        mms = tuple(
            _parse_rational(x, f"mms entry {i}") for i, x in enumerate(doc["mms"])
        )
    report = doc.get("report")
    if report is not None and not isinstance(report, dict):
        raise ParseError("report: expected an object")
    return ResultDocument(
        algorithm=algorithm,
        allocation=allocation,
        randomized=randomized,
        mms=mms,
        report=report,
    )


def load_result(path: str, m: int | None = None) -> ResultDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_result(fh.read(), m)
