"""Graph and domain file formats.

Graph JSON is a single document::

    {"vertices": [{"id": 0, "w": 1.0, "coords": [0.0, 1.0]}, ...],
     "edges":    [{"tail": 0, "head": 1, "w": 1.0}, ...],
     "mode":     "full" | "symmetrize"}

``coords`` is optional and only present for geometric builders. In
``symmetrize`` mode missing reverse edges are filled from the
reversibility condition ``W_E(y,x) = W_E(x,y) W_V(x) / W_V(y)``; in
``full`` mode every edge must appear in both directions. A non-canonical
orientation is preserved through an optional ``"orientation"`` list.

Domain JSON selects a vertex set of a parent graph::

    {"graph": "path-or-inline", "vertices": [ids]}      explicit list
    {"graph": ..., "box": {"lo": [...], "hi": [...]}}   by coordinates
"""

from __future__ import annotations

import json
import os
from typing import Optional, Tuple

from .errors import GraphFormatError, SpectralwalkError, WeightingError
from .graph import GraphWithGeometry, make_graph, validate_weighting


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise GraphFormatError(str(exc), path=path) from exc
    except json.JSONDecodeError as exc:
        raise GraphFormatError(exc.msg, line=exc.lineno, path=path) from exc


def graph_from_document(doc, mode: Optional[str] = None, path=None) -> GraphWithGeometry:
    """Build and validate a graph from a parsed graph JSON document."""
    if not isinstance(doc, dict):
        raise GraphFormatError("graph document must be a JSON object", path=path)
    file_mode = doc.get("mode", "full")
    mode = mode or file_mode
    if mode not in ("full", "symmetrize"):
        raise GraphFormatError(f"unknown mode {mode!r}", path=path)

    vertex_weights = {}
    coords = {}
    for rec in doc.get("vertices", []):
        try:
            vid = rec["id"]
            vertex_weights[vid] = rec["w"]
        except (KeyError, TypeError) as exc:
            raise GraphFormatError(f"bad vertex record {rec!r}", path=path) from exc
        if vid in coords:
            raise GraphFormatError(f"duplicate vertex id {vid}", path=path)
        coords[vid] = tuple(rec["coords"]) if "coords" in rec else None
    if any(c is None for c in coords.values()):
        coords = None

    edge_weights = {}
    for rec in doc.get("edges", []):
        try:
            key = (rec["tail"], rec["head"])
            if key in edge_weights:
                raise GraphFormatError(f"duplicate edge {key}", path=path)
            edge_weights[key] = rec["w"]
        except (KeyError, TypeError) as exc:
            raise GraphFormatError(f"bad edge record {rec!r}", path=path) from exc

    if mode == "symmetrize":
        for (t, h), w in list(edge_weights.items()):
            if (h, t) not in edge_weights:
                try:
                    edge_weights[(h, t)] = w * vertex_weights[t] / vertex_weights[h]
                except KeyError as exc:
                    raise GraphFormatError(
                        f"edge ({t},{h}) references unknown vertex", path=path
                    ) from exc

    orientation = None
    if "orientation" in doc:
        orientation = [(t, h) for t, h in doc["orientation"]]

    g = make_graph(vertex_weights, edge_weights, orientation=orientation, coords=coords)
    violations = validate_weighting(g)
    if violations:
        raise WeightingError(violations)
    return g


def read_graph(path, mode: Optional[str] = None) -> GraphWithGeometry:
    """Read, symmetrize if requested, and validate a graph JSON file."""
    return graph_from_document(_load_json(path), mode=mode, path=path)


def _canonical_orientation(g: GraphWithGeometry):
    return frozenset((x, y) for (x, y) in g.edge_weights if x < y)


def write_graph(g: GraphWithGeometry, path) -> None:
    """Write a graph as JSON; read_graph(write_graph(g)) reproduces g."""
    vertices = []
    for i in g.vertices:
        rec = {"id": g.original_ids[i], "w": g.vertex_weights[i]}
        if g.coords is not None:
            rec["coords"] = list(g.coords[i])
        vertices.append(rec)
    edges = [
        {"tail": g.original_ids[t], "head": g.original_ids[h], "w": w}
        for (t, h), w in sorted(g.edge_weights.items())
    ]
    doc = {"vertices": vertices, "edges": edges, "mode": "full"}
    if g.orientation != _canonical_orientation(g):
        doc["orientation"] = [
            [g.original_ids[t], g.original_ids[h]] for (t, h) in sorted(g.orientation)
        ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_domain_spec(path, graph: Optional[GraphWithGeometry] = None) -> Tuple[GraphWithGeometry, frozenset]:
    """Resolve a domain JSON file to (parent graph, dense vertex set).

    The parent graph comes from the ``graph`` key (a path relative to the
    domain file, or an inline graph document) unless one is supplied by
    the caller, which then takes precedence.
    """
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise GraphFormatError("domain document must be a JSON object", path=path)

    if graph is None:
        ref = doc.get("graph")
        if ref is None:
            raise GraphFormatError("domain file names no graph and none was supplied", path=path)
        if isinstance(ref, str):
            gpath = ref if os.path.isabs(ref) else os.path.join(os.path.dirname(path) or ".", ref)
            graph = read_graph(gpath)
        else:
            graph = graph_from_document(ref, path=path)

    if "vertices" in doc:
        index = {orig: i for i, orig in enumerate(graph.original_ids)}
        try:
            dense = frozenset(index[v] for v in doc["vertices"])
        except KeyError as exc:
            raise GraphFormatError(f"domain lists unknown vertex {exc.args[0]}", path=path)
        return graph, dense
    if "box" in doc:
        box = doc["box"]
        try:
            lo, hi = list(box["lo"]), list(box["hi"])
        except (KeyError, TypeError) as exc:
            raise GraphFormatError("box must carry 'lo' and 'hi' arrays", path=path) from exc
        if graph.coords is None:
            raise GraphFormatError("box selection needs a graph with coordinates", path=path)
        dense = frozenset(
            i
            for i, c in graph.coords.items()
            if len(c) == len(lo) and all(a <= x <= b for a, x, b in zip(lo, c, hi))
        )
        if not dense:
            raise GraphFormatError("box selects no vertices", path=path)
        return graph, dense
    raise GraphFormatError("domain file needs 'vertices' or 'box'", path=path)


def read_points_csv(path):
    """Read a CSV of coordinate rows (comments and blank lines skipped)."""
    points = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                row = line.strip()
                if not row or row.startswith("#"):
                    continue
                try:
                    points.append(tuple(float(tok) for tok in row.split(",")))
                except ValueError as exc:
                    raise GraphFormatError(
                        f"bad coordinate row {row!r}", line=lineno, path=path
                    ) from exc
    except OSError as exc:
        raise GraphFormatError(str(exc), path=path) from exc
    if not points:
        raise GraphFormatError("no points found", path=path)
    if len({len(p) for p in points}) != 1:
        raise GraphFormatError("rows have inconsistent dimension", path=path)
    return points
