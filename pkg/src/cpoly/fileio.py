"""The ``cpoly/1`` JSON file format.

    {"format": "cpoly/1",
     "vertices": [{"id": 1, "disk": [a, b, c, d]}, ...],
     "faces": [[1, 2, 3], ...],
     "metadata": {...}}

Floats are written with 17 significant digits so that a save/load round
trip reproduces every coordinate bit for bit.
"""

from __future__ import annotations

import json
import logging
import math

import numpy as np

from .errors import NormalizationError, ParseError, SchemaError
from .lorentz import lorentz_ip
from .polyhedron import CPolyhedron, validate

FORMAT = "cpoly/1"
UNIT_TOL = 1e-8
RENORMALIZE_TOL = 1e-4

log = logging.getLogger(__name__)


def _scalar(x) -> str:
    if isinstance(x, (bool, np.bool_)) or x is None:
        return json.dumps(None if x is None else bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            # Infinite black-edge lengths and similar sentinels.
            return json.dumps(None) if math.isnan(x) else ('"inf"' if x > 0 else '"-inf"')
        return "%.17g" % x
    return json.dumps(str(x) if not isinstance(x, str) else x, ensure_ascii=False)


def dumps(obj, indent: int = 1, _level: int = 0) -> str:
    """JSON text with floats written to 17 significant digits."""
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        pad = " " * indent * (_level + 1)
        items = [
            f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent * _level + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        pad = " " * indent * (_level + 1)
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + " " * indent * _level + "]"
    return _scalar(obj)


def to_document(P: CPolyhedron, metadata: dict | None = None) -> dict:
    tri = P.triangulation
    return {
        "format": FORMAT,
        "vertices": [
            {"id": vid, "disk": [float(x) for x in P.vectors[k]]}
            for k, vid in enumerate(tri.ids)
        ],
        "faces": [list(f) for f in tri.face_ids()],
        "metadata": metadata or {},
    }


def save(P: CPolyhedron, path, metadata: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(to_document(P, metadata)))
        fh.write("\n")


def from_document(doc) -> CPolyhedron:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    if doc.get("format") != FORMAT:
        raise SchemaError(f"format must be {FORMAT!r}, got {doc.get('format')!r}")
    verts, faces = doc.get("vertices"), doc.get("faces")
    if not isinstance(verts, list) or not isinstance(faces, list):
        raise SchemaError("'vertices' and 'faces' must be lists")
    disks = {}
    for v in verts:
        if not isinstance(v, dict) or "id" not in v or "disk" not in v:
            raise SchemaError("each vertex needs 'id' and 'disk'")
        vid, d = v["id"], v["disk"]
        if not isinstance(vid, int) or isinstance(vid, bool):
            raise SchemaError(f"vertex id {vid!r} is not an integer")
        if vid in disks:
            raise SchemaError(f"duplicate vertex id {vid}")
        if not (isinstance(d, list) and len(d) == 4
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in d)):
            raise SchemaError(f"vertex {vid}: disk must be four numbers")
        disks[vid] = _unit(vid, np.array(d, dtype=float))
    for f in faces:
        if not (isinstance(f, list) and len(f) == 3 and all(isinstance(x, int) for x in f)):
            raise SchemaError(f"face {f!r} is not a triple of vertex ids")
        if any(x not in disks for x in f):
            raise SchemaError(f"face {f!r} names an unknown vertex")
    tri = validate(faces, list(disks))
    return CPolyhedron(tri, [disks[i] for i in tri.ids])


def _unit(vid, d: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(d)):
        raise NormalizationError(f"vertex {vid}: non-finite disk")
    q = lorentz_ip(d, d)
    gap = abs(q - 1.0)
    if gap <= UNIT_TOL:
        if gap > 1e-10:
            d = d / math.sqrt(q)
        return d
    if gap <= RENORMALIZE_TOL and q > 0:
        log.warning("vertex %s: disk off the de Sitter sphere by %.2e, renormalized", vid, gap)
        return d / math.sqrt(q)
    raise NormalizationError(f"vertex {vid}: <d,d> = {q:.6g} is not 1")


def load(path) -> CPolyhedron:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    return from_document(doc)


def load_with_metadata(path):
    P = load(path)
    with open(path, encoding="utf-8") as fh:
        return P, json.load(fh).get("metadata", {})
