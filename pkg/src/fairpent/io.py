"""JSON tiling documents and SVG rendering."""

from __future__ import annotations

import json
from typing import Iterable, Sequence, Tuple

import numpy as np

from .geometry import ConvexPolygon
from .tiling import PentagonRecord, Tiling

FORMAT_VERSION = 1
FILLS = ("#e4572e", "#4e8098", "#f3a712")


class DocumentError(ValueError):
    """Malformed or unsupported tiling document."""


def tiling_to_document(t: Tiling) -> dict:
    # Python's float repr is the shortest string that round-trips, at most 17 digits
    pentagons = [
        {
            "id": r.id,
            "cluster": r.cluster,
            "hexagon": r.hexagon,
            "index": r.index,
            "marked_side": r.marked_side,
            "vertices": [[float(x), float(y)] for x, y in r.polygon.vertices],
        }
        for r in sorted(t.pentagons, key=lambda r: r.id)
    ]
    return {
        "format_version": FORMAT_VERSION,
        "targets": {"area": repr(float(t.area_target)), "perimeter": repr(float(t.perimeter_target))},
        "generation": t.generation,
        "pentagons": pentagons,
    }


def document_to_tiling(doc: dict) -> Tiling:
    try:
        if doc["format_version"] != FORMAT_VERSION:
            raise DocumentError(f"unsupported format_version {doc['format_version']!r}")
        records = []
        for p in doc["pentagons"]:
            verts = np.array(p["vertices"], dtype=np.float64)
            if verts.shape != (5, 2):
                raise DocumentError(f"pentagon {p.get('id')} does not have 5 vertices")
            records.append(
                PentagonRecord(
                    int(p["id"]), int(p["cluster"]), int(p["hexagon"]), int(p["index"]), ConvexPolygon(verts), int(p["marked_side"])
                )
            )
        targets = doc["targets"]
        return Tiling(records, float(targets["area"]), float(targets["perimeter"]), dict(doc.get("generation", {})))
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed tiling document: {exc}") from exc


def dumps(t: Tiling) -> str:
    return json.dumps(tiling_to_document(t), indent=1, sort_keys=True) + "\n"


def loads(text: str) -> Tiling:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("top-level JSON value must be an object")
    return document_to_tiling(doc)


def save(t: Tiling, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(t))


def load(path) -> Tiling:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def _fmt(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def svg_from_polygons(items: Iterable[Tuple[Sequence, int]], stroke_width: float = 0.02) -> str:
    """SVG 1.1 document with one ``<polygon>`` per ``(vertices, colour index)``.

    The y axis is flipped so the picture matches mathematical orientation.
    """
    items = [(np.asarray(v, dtype=np.float64), int(c)) for v, c in items]
    if items:
        allpts = np.concatenate([v for v, _ in items])
        lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    else:
        lo, hi = np.zeros(2), np.ones(2)
    span = hi - lo
    margin = 0.05 * np.where(span > 0, span, 1.0)
    x0, x1 = lo[0] - margin[0], hi[0] + margin[0]
    y0, y1 = -(hi[1] + margin[1]), -(lo[1] - margin[1])
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(x1 - x0)} {_fmt(y1 - y0)}">',
        f'<g stroke="#222222" stroke-width="{_fmt(stroke_width)}" stroke-linejoin="round">',
    ]
    for v, c in items:
        pts = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in v)
        lines.append(f'<polygon points="{pts}" fill="{FILLS[c % len(FILLS)]}"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)


def render_svg(t: Tiling, path=None) -> str:
    """Render a tiling, colouring each pentagon by its index within its hexagon."""
    text = svg_from_polygons((r.polygon.vertices, r.index) for r in sorted(t.pentagons, key=lambda r: r.id))
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
