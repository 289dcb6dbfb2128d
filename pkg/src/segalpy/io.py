"""JSON documents for simplicial and bisimplicial sets, reports and requests.

Simplices are named by strings in documents and by consecutive integers in
memory.  Parsing orders simplices by dimension (then by their position in
the document) so that faces always point backwards; serialization writes
that order back, which makes ``serialize(parse(doc)) == doc`` for every
document already in canonical form.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Dict, List, Tuple

from .bisimplicial import Bisimplicial, BisimplicialBuilder
from .bisimplicial import validate as validate_bisimplicial
from .errors import ParseError, ValidationError
from .simplicial import Builder, SimplicialMap, SimplicialSet, validate


def dumps(doc: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    return loads(text, path)


def fingerprint(doc: Any) -> str:
    return "sha256:" + hashlib.sha256(dumps(doc).encode()).hexdigest()


def _expect(cond: bool, field: str, what: str) -> None:
    if not cond:
        raise ParseError(f"field {field}: {what}")


def _nat(value, field: str) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool) and value >= 0,
            field, "expected a natural number")
    return value


def _op(value, field: str, length: int) -> Tuple[int, ...]:
    _expect(isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool)
                                            for v in value), field, "expected a list of integers")
    _expect(len(value) == length, field, f"expected {length} values, got {len(value)}")
    return tuple(value)


def _surjection(op: Tuple[int, ...], field: str) -> Tuple[int, ...]:
    ok = bool(op) and op[0] == 0 and all(b - a in (0, 1) for a, b in zip(op, op[1:]))
    if not ok:
        raise ValidationError(f"{field}: {list(op)} is not a monotone surjection", [field])
    return op


def _ordered_ids(doc: dict, key: str, parse_key) -> List[Tuple[Any, str]]:
    table = doc.get(key)
    _expect(isinstance(table, dict), key, "expected an object")
    out = []
    seen = set()
    for dk, ids in table.items():
        deg = parse_key(dk, f"{key}.{dk}")
        _expect(isinstance(ids, list), f"{key}.{dk}", "expected a list of ids")
        for j, sid in enumerate(ids):
            _expect(isinstance(sid, str), f"{key}.{dk}[{j}]", "expected a string id")
            if sid in seen:
                raise ValidationError(f"duplicate simplex id {sid!r}", [sid])
            seen.add(sid)
            out.append((deg, sid))
    out.sort(key=lambda t: t[0] if isinstance(t[0], tuple) else (t[0],))
    return out


# -- simplicial sets -------------------------------------------------------

def _dim_key(dk: str, field: str) -> int:
    _expect(dk.isdigit(), field, "dimension keys are decimal naturals")
    return int(dk)


def parse_simplicial(doc: Any) -> SimplicialSet:
    """A validated :class:`SimplicialSet` from its JSON document."""
    _expect(isinstance(doc, dict), "<root>", "expected an object")
    cap = _nat(doc.get("cap"), "cap")
    order = _ordered_ids(doc, "simplices", _dim_key)
    faces = doc.get("faces", {})
    _expect(isinstance(faces, dict), "faces", "expected an object")
    index: Dict[str, int] = {}
    dims: Dict[str, int] = {sid: d for d, sid in order}
    for sid in faces:
        if sid not in dims:
            raise ValidationError(f"faces given for unknown simplex {sid!r}", [sid])
    b = Builder(cap)
    for d, sid in order:
        if d > cap:
            raise ValidationError(f"simplex {sid!r} has dimension {d} above cap {cap}", [sid])
        flist = faces.get(sid, [])
        _expect(isinstance(flist, list), f"faces.{sid}", "expected a list")
        if len(flist) != (d + 1 if d > 0 else 0):
            raise ValidationError(f"simplex {sid!r} of dimension {d} has {len(flist)} faces",
                                  [sid])
        refs = []
        for i, f in enumerate(flist):
            field = f"faces.{sid}[{i}]"
            _expect(isinstance(f, dict), field, "expected an object")
            tgt = f.get("target")
            _expect(isinstance(tgt, str), f"{field}.target", "expected a string id")
            if tgt not in index:
                reason = "unknown" if tgt not in dims else "not of lower dimension"
                raise ValidationError(f"simplex {sid!r}: face {i} target {tgt!r} is {reason}",
                                      [sid])
            op = _surjection(_op(f.get("op"), f"{field}.op", d), field)
            if op[-1] != dims[tgt]:
                raise ValidationError(f"simplex {sid!r}: face {i} op does not land on "
                                      f"dimension {dims[tgt]}", [sid])
            refs.append((op, index[tgt]))
        index[sid] = b.add(d, refs, sid)
    X = b.build()
    problems = validate(X)
    if problems:
        raise ValidationError(f"{len(problems)} simplicial identity violations", problems)
    return X


def _labels(obj) -> List[str]:
    """Stored names when they are unique, otherwise the integer ids."""
    names = [obj.name(x) for x in obj.ids()]
    return names if len(set(names)) == len(names) else [str(x) for x in obj.ids()]


def serialize_simplicial(X: SimplicialSet) -> dict:
    lab = _labels(X)
    simplices: Dict[str, List[str]] = {}
    faces: Dict[str, list] = {}
    for k in range(X.cap + 1):
        ids = X.simplices(k)
        if ids:
            simplices[str(k)] = [lab[x] for x in ids]
        for x in ids:
            if k > 0:
                faces[lab[x]] = [{"op": list(op), "target": lab[t]}
                                    for op, t in X.faces(x)]
    return {"cap": X.cap, "simplices": simplices, "faces": faces}


def parse_map(doc: Any, source: SimplicialSet, target: SimplicialSet,
              field: str = "map") -> SimplicialMap:
    """``{"<source id>": {"op": [...], "target": "<target id>"}}`` for every simplex."""
    _expect(isinstance(doc, dict), field, "expected an object")
    tindex = {target.name(y): y for y in target.ids()}
    assignment = []
    for x in source.ids():
        sid = source.name(x)
        entry = doc.get(sid)
        _expect(isinstance(entry, dict), f"{field}.{sid}", "missing or not an object")
        tgt = entry.get("target")
        if tgt not in tindex:
            raise ValidationError(f"{field}: {sid!r} maps to unknown simplex {tgt!r}", [sid])
        op = _surjection(_op(entry.get("op"), f"{field}.{sid}.op", source.dim(x) + 1),
                         f"{field}.{sid}")
        if op[-1] != target.dim(tindex[tgt]):
            raise ValidationError(f"{field}: {sid!r} op does not land on {tgt!r}", [sid])
        assignment.append((op, tindex[tgt]))
    f = SimplicialMap(source, target, assignment)
    problems = f.violations()
    if problems:
        raise ValidationError(f"{field} is not simplicial", problems)
    return f


def serialize_map(f: SimplicialMap) -> dict:
    src, tgt = _labels(f.source), _labels(f.target)
    return {src[x]: {"op": list(op), "target": tgt[y]}
            for x, (op, y) in zip(f.source.ids(), f.assignment)}


# -- bisimplicial sets -----------------------------------------------------

def _bideg_key(dk: str, field: str) -> Tuple[int, int]:
    parts = dk.split(",")
    _expect(len(parts) == 2 and all(p.isdigit() for p in parts), field,
            "bidegree keys look like \"p,q\"")
    return int(parts[0]), int(parts[1])


def parse_bisimplicial(doc: Any) -> Bisimplicial:
    _expect(isinstance(doc, dict), "<root>", "expected an object")
    pcap = _nat(doc.get("pcap"), "pcap")
    qcap = _nat(doc.get("qcap"), "qcap")
    order = _ordered_ids(doc, "cells", _bideg_key)
    order.sort(key=lambda t: (t[0][0] + t[0][1], t[0]))
    hdoc = doc.get("hfaces", {})
    vdoc = doc.get("vfaces", {})
    _expect(isinstance(hdoc, dict), "hfaces", "expected an object")
    _expect(isinstance(vdoc, dict), "vfaces", "expected an object")
    bideg = {sid: pq for pq, sid in order}
    index: Dict[str, int] = {}
    b = BisimplicialBuilder(pcap, qcap)

    def refs(table, name, sid, count, p, q):
        flist = table.get(sid, [])
        _expect(isinstance(flist, list), f"{name}.{sid}", "expected a list")
        if len(flist) != count:
            raise ValidationError(f"cell {sid!r} has {len(flist)} {name}, expected {count}",
                                  [sid])
        out = []
        for i, f in enumerate(flist):
            field = f"{name}.{sid}[{i}]"
            _expect(isinstance(f, dict), field, "expected an object")
            tgt = f.get("target")
            if tgt not in index:
                raise ValidationError(f"cell {sid!r}: {name} {i} target {tgt!r} is unknown "
                                      "or not earlier", [sid])
            sh = _surjection(_op(f.get("sh"), f"{field}.sh", p), field)
            sv = _surjection(_op(f.get("sv"), f"{field}.sv", q), field)
            if (sh[-1], sv[-1]) != bideg[tgt]:
                raise ValidationError(f"cell {sid!r}: {name} {i} does not land on {tgt!r}", [sid])
            out.append((sh, sv, index[tgt]))
        return out

    for (p, q), sid in order:
        if p > pcap or q > qcap:
            raise ValidationError(f"cell {sid!r} above the caps", [sid])
        hf = refs(hdoc, "hfaces", sid, p + 1 if p > 0 else 0, p, q + 1)
        vf = refs(vdoc, "vfaces", sid, q + 1 if q > 0 else 0, p + 1, q)
        index[sid] = b.add(p, q, hf, vf, sid)
    A = b.build()
    problems = validate_bisimplicial(A)
    if problems:
        raise ValidationError(f"{len(problems)} bisimplicial identity violations", problems)
    return A


def serialize_bisimplicial(A: Bisimplicial) -> dict:
    lab = _labels(A)
    cells: Dict[str, List[str]] = {}
    hfaces: Dict[str, list] = {}
    vfaces: Dict[str, list] = {}
    for x in A.ids():
        p, q = A.bidegree(x)
        cells.setdefault(f"{p},{q}", []).append(lab[x])
        if p > 0:
            hfaces[lab[x]] = [{"sh": list(sh), "sv": list(sv), "target": lab[t]}
                                 for sh, sv, t in A.hfaces(x)]
        if q > 0:
            vfaces[lab[x]] = [{"sh": list(sh), "sv": list(sv), "target": lab[t]}
                                 for sh, sv, t in A.vfaces(x)]
    return {"pcap": A.pcap, "qcap": A.qcap, "cells": cells, "hfaces": hfaces,
            "vfaces": vfaces}
