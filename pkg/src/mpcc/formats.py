"""Stable JSON file formats for instances, solutions, and solver traces.

Instance document::

    {"c": real, "alpha": real, "k": int, "aps": [[x, y], ...], "tds": [[x, y], ...]}

Solution document::

    {"total_power": real,
     "assignments": [{"ap": id, "disk_td": id, "radius": real,
                      "power": real, "covered": [id, ...]}, ...]}

Ids are 1-based positions in the instance arrays.  Reals are written with
up to 17 significant digits so parsing recovers the exact double; the
``radius`` and ``power`` fields of an assignment are informational on
output and recomputed from the ids on input.  Serialization is
deterministic: equal values produce byte-identical documents.
"""

import json
import math

from .model import Disk, Instance, Solution, check_feasible, make_disk

__all__ = [
    "FormatError",
    "instance_to_json",
    "instance_from_json",
    "solution_to_json",
    "solution_from_json",
    "solution_violations",
    "trace_to_jsonl",
]


class FormatError(ValueError):
    """A document does not match the expected file format."""


def _fmt_real(x: float) -> str:
    if not math.isfinite(x):
        raise FormatError(f"cannot serialize non-finite real {x!r}")
    return format(float(x), ".17g")


def _dump(value) -> str:
    if isinstance(value, bool):
        raise FormatError("no boolean fields in these formats")
    if isinstance(value, float):
        return _fmt_real(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_dump(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in value) + "]"
    raise FormatError(f"cannot serialize {type(value).__name__}")


def instance_to_json(inst: Instance) -> str:
    doc = {
        "c": float(inst.power_c),
        "alpha": float(inst.power_alpha),
        "k": int(inst.k),
        "aps": [[p.x, p.y] for p in inst.aps],
        "tds": [[p.x, p.y] for p in inst.tds],
    }
    return _dump(doc) + "\n"


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


def _point_list(doc, field: str) -> list[tuple[float, float]]:
    pts = doc.get(field)
    if not isinstance(pts, list):
        raise FormatError(f"'{field}' must be a list of [x, y] pairs")
    out = []
    for i, p in enumerate(pts):
        if (
            not isinstance(p, list)
            or len(p) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)
        ):
            raise FormatError(f"'{field}'[{i}] is not an [x, y] pair of numbers")
        out.append((float(p[0]), float(p[1])))
    return out


def instance_from_json(text: str) -> Instance:
    doc = _load(text)
    if not isinstance(doc, dict):
        raise FormatError("instance document must be a JSON object")
    missing = [f for f in ("c", "alpha", "k", "aps", "tds") if f not in doc]
    if missing:
        raise FormatError(f"instance document missing fields {missing}")
    for f in ("c", "alpha"):
        if not isinstance(doc[f], (int, float)) or isinstance(doc[f], bool):
            raise FormatError(f"'{f}' must be a number")
    if not isinstance(doc["k"], int) or isinstance(doc["k"], bool):
        raise FormatError("'k' must be an integer")
    return Instance.from_coords(
        aps=_point_list(doc, "aps"),
        tds=_point_list(doc, "tds"),
        k=doc["k"],
        power_c=doc["c"],
        power_alpha=doc["alpha"],
    )


def solution_to_json(sol: Solution, inst: Instance) -> str:
    assignments = []
    for ap_id in sorted(sol.selected):
        d = sol.selected[ap_id]
        assignments.append(
            {
                "ap": int(ap_id),
                "disk_td": int(d.td_id),
                "radius": math.sqrt(d.radius_sq),
                "power": float(d.power),
                "covered": sorted(int(u) for u in sol.coverage.get(ap_id, ())),
            }
        )
    doc = {"total_power": float(sol.total_power), "assignments": assignments}
    return _dump(doc) + "\n"


def _solution_parts(text: str):
    """Shape-check a solution document; returns (total_power, assignment
    triples).  Structural problems raise FormatError; semantic problems
    (bad ids, duplicate APs) are left to the caller."""
    doc = _load(text)
    if not isinstance(doc, dict):
        raise FormatError("solution document must be a JSON object")
    if "total_power" not in doc or "assignments" not in doc:
        raise FormatError("solution document needs 'total_power' and 'assignments'")
    total = doc["total_power"]
    if not isinstance(total, (int, float)) or isinstance(total, bool):
        raise FormatError("'total_power' must be a number")
    raw = doc["assignments"]
    if not isinstance(raw, list):
        raise FormatError("'assignments' must be a list")
    triples = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise FormatError(f"assignment {i} is not an object")
        for f in ("ap", "disk_td", "covered"):
            if f not in entry:
                raise FormatError(f"assignment {i} missing '{f}'")
        ap, td, covered = entry["ap"], entry["disk_td"], entry["covered"]
        if not isinstance(ap, int) or not isinstance(td, int) or isinstance(ap, bool):
            raise FormatError(f"assignment {i} ids must be integers")
        if not isinstance(covered, list) or not all(
            isinstance(u, int) and not isinstance(u, bool) for u in covered
        ):
            raise FormatError(f"assignment {i} 'covered' must be a list of integers")
        triples.append((ap, td, covered))
    return float(total), triples


def solution_from_json(text: str, inst: Instance) -> Solution:
    """Strict parse used for round-trips; disks are rebuilt from the ids."""
    total, triples = _solution_parts(text)
    selected: dict[int, Disk] = {}
    coverage: dict[int, frozenset[int]] = {}
    for ap, td, covered in triples:
        if ap in selected:
            raise FormatError(f"duplicate assignment for AP {ap}")
        if not 1 <= ap <= inst.m or not 1 <= td <= inst.n:
            raise FormatError(f"assignment ids ({ap}, {td}) outside the instance")
        selected[ap] = make_disk(inst, ap, td)
        coverage[ap] = frozenset(covered)
    return Solution(selected=selected, coverage=coverage, total_power=total)


def solution_violations(text: str, inst: Instance) -> list[str]:
    """Feasibility report for a solution document.

    Structural problems raise FormatError; everything semantic (duplicate
    AP assignments, unknown ids, coverage or capacity faults, power
    mismatches) comes back as violation strings via ``check_feasible``.
    """
    total, triples = _solution_parts(text)
    violations = []
    seen = set()
    for ap, _, _ in triples:
        if ap in seen:
            violations.append(f"more than one disk selected for AP {ap}")
        seen.add(ap)
    id_ok = True
    for ap, td, covered in triples:
        if not 1 <= ap <= inst.m:
            violations.append(f"assignment references unknown AP {ap}")
            id_ok = False
        if not 1 <= td <= inst.n:
            violations.append(f"assignment of AP {ap} references unknown TD {td}")
            id_ok = False
    if violations or not id_ok:
        return violations
    selected = {ap: make_disk(inst, ap, td) for ap, td, _ in triples}
    coverage = {ap: frozenset(covered) for ap, _, covered in triples}
    sol = Solution(selected=selected, coverage=coverage, total_power=total)
    return check_feasible(sol, inst)


def trace_to_jsonl(records) -> str:
    """Line-delimited JSON, one solver round per line."""
    return "".join(_dump(r.to_doc()) + "\n" for r in records)
