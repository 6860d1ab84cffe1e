"""Point-set JSON files and CSV distance matrices."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import HS2SDError, InputError
from .pointset import PointSet

FORMAT_VERSION = 1


def fmt(x) -> str:
    """12 significant digits, the precision of every number the CLI prints."""
    return f"{float(x):.12g}"


def rounded(x):
    """JSON-ready value rounded to 12 significant digits (``None`` passes through)."""
    return None if x is None else float(fmt(x))


def point_set_document(sets, curvature: float) -> dict:
    sets = list(sets)
    dim = sets[0].dim if sets else 0
    return {
        "format_version": FORMAT_VERSION,
        "curvature": curvature,
        "dimension": dim,
        "sets": [
            {"id": s.id, **({"label": s.label} if s.label is not None else {}), "points": s.points.tolist()}
            for s in sets
        ],
    }


def dump_point_sets(sets, curvature: float) -> str:
    return json.dumps(point_set_document(sets, curvature)) + "\n"


def parse_point_sets(doc: dict, curvature: float | None = None) -> list[PointSet]:
    """Build point sets from a parsed document; ``curvature`` overrides the file's value."""
    if not isinstance(doc, dict):
        raise InputError("point-set file must hold a JSON object")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported point-set format_version {version!r}")
    try:
        c = float(doc["curvature"] if curvature is None else curvature)
        dim = int(doc["dimension"])
        entries = doc["sets"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"point-set file is missing a field: {exc}") from None
    out, seen = [], set()
    for k, entry in enumerate(entries):
        sid = str(entry.get("id", k))
        if sid in seen:
            raise InputError(f"duplicate set id {sid!r}")
        seen.add(sid)
        pts = entry.get("points")
        if not isinstance(pts, list) or not pts:
            raise InputError(f"set {sid!r} has no points")
        if any(not isinstance(row, list) or len(row) != dim for row in pts):
            raise InputError(f"set {sid!r} has a point row without {dim} coordinates")
        label = entry.get("label")
        try:
            out.append(PointSet(np.asarray(pts, dtype=np.float64), c, sid, None if label is None else str(label)))
        except HS2SDError as exc:
            raise type(exc)(f"set {sid!r}: {exc}") from None
        except (TypeError, ValueError) as exc:
            raise InputError(f"set {sid!r} has non-numeric coordinates: {exc}") from None
    return out


def load_point_sets(path, curvature: float | None = None) -> list[PointSet]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read point-set file {path}: {exc}") from None
    return parse_point_sets(doc, curvature)


def matrix_csv(ids, m: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", *ids])
    for sid, row in zip(ids, m):
        w.writerow([sid, *(fmt(v) for v in row)])
    return buf.getvalue()


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_matrix_csv(path) -> np.ndarray:
    """Read a square numeric CSV, with or without an id header row and id column."""
    try:
        rows = [r for r in csv.reader(Path(path).read_text().splitlines()) if r]
    except OSError as exc:
        raise InputError(f"cannot read matrix file {path}: {exc}") from None
    if rows and not all(_is_number(x) for x in rows[0]):
        rows = rows[1:]
    if rows and len(rows[0]) == len(rows) + 1:
        rows = [r[1:] for r in rows]
    try:
        m = np.array([[float(x) for x in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise InputError(f"matrix file {path} has a non-numeric entry: {exc}") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"matrix file {path} is not square (shape {m.shape})")
    return m
