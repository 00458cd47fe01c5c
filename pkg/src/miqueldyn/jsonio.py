"""Canonical JSON for graphs, patterns, drawings, weights, and patches.

Every emitter produces one canonical byte form: keys sorted, no
whitespace, floats printed with 17 significant digits (enough to round
trip a double), the point at infinity as the string "inf".  Files are
written atomically so a crashed run never leaves a half-written file.
"""

import json
import math
import os
import tempfile
from typing import Dict, List

from .circle_pattern import CirclePattern, FaceDrawing
from .errors import SchemaError
from .geometry import Circle, INFINITY, is_infinite
from .lattice import OctahedralPatch
from .surface_graph import Edge, SurfaceGraph, validate_surface_graph


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise SchemaError("non-finite number in canonical JSON")
    if x == 0.0:
        return "0"
    # "%.17g" keeps an exact short form for integral values
    return "%.17g" % x


def canonical_dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, %.17g floats."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return repr(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        for k in obj:
            if not isinstance(k, str):
                raise SchemaError("canonical JSON keys must be strings")
        items = ("%s:%s" % (json.dumps(k), canonical_dumps(obj[k]))
                 for k in sorted(obj))
        return "{" + ",".join(items) + "}"
    raise SchemaError("cannot serialize %r" % type(obj))


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path: str, obj) -> None:
    write_text_atomic(path, canonical_dumps(obj) + "\n")


def read_json(path: str):
    with open(path) as handle:
        return json.load(handle)


# -- scalar values ---------------------------------------------------------

def complex_to_json(z):
    if is_infinite(z):
        return "inf"
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v):
    if v == "inf":
        return INFINITY
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise SchemaError("expected [re, im] or \"inf\", got %r" % (v,))


def circle_to_json(c: Circle) -> Dict:
    if c.is_line():
        return {"kind": "line", "a": complex_to_json(c.p), "b": complex_to_json(c.q)}
    return {"kind": "circle", "center": complex_to_json(c.center),
            "radius": float(c.radius)}


def _finite_from_json(v) -> complex:
    z = complex_from_json(v)
    if is_infinite(z):
        raise SchemaError("expected a finite point, got \"inf\"")
    return complex(z)


def circle_from_json(d) -> Circle:
    if not isinstance(d, dict) or "kind" not in d:
        raise SchemaError("circle object needs a \"kind\" field")
    try:
        if d["kind"] == "line":
            return Circle.make_line(_finite_from_json(d["a"]),
                                    _finite_from_json(d["b"]))
        if d["kind"] == "circle":
            return Circle.make_circle(_finite_from_json(d["center"]),
                                      float(d["radius"]))
    except (KeyError, TypeError, ValueError) as err:
        raise SchemaError("malformed circle JSON: %s" % err) from err
    raise SchemaError("unknown circle kind %r" % d["kind"])


# -- surface graphs --------------------------------------------------------

def graph_to_json(g: SurfaceGraph) -> Dict:
    edges: List[Dict] = []
    for eid in sorted(g.edges):
        e = g.edges[eid]
        entry: Dict = {"id": eid, "minus": e.minus, "plus": e.plus}
        if e.offset != (0, 0):
            entry["offset"] = list(e.offset)
        edges.append(entry)
    faces = [{"id": fid,
              "edge_cycle": [[eid, 1 if fwd else -1] for eid, fwd in g.faces[fid]]}
             for fid in sorted(g.faces)]
    out = {
        "surface": g.surface,
        "vertices": [{"id": v, "color": g.vertex_color[v]}
                     for v in sorted(g.vertex_color)],
        "edges": edges,
        "faces": faces,
    }
    if g.boundary_faces:
        out["boundary_faces"] = sorted(g.boundary_faces)
    return out


def graph_from_json(d) -> SurfaceGraph:
    try:
        colors = {int(v["id"]): int(v["color"]) for v in d["vertices"]}
        edges = {}
        for e in d["edges"]:
            offset = tuple(e.get("offset", (0, 0)))
            edges[int(e["id"])] = Edge(minus=int(e["minus"]), plus=int(e["plus"]),
                                       offset=(int(offset[0]), int(offset[1])))
        faces = {}
        for f in d["faces"]:
            steps = []
            for eid, direction in f["edge_cycle"]:
                if direction not in (1, -1):
                    raise SchemaError("edge_cycle direction must be 1 or -1")
                steps.append((int(eid), direction == 1))
            faces[int(f["id"])] = tuple(steps)
        boundary = frozenset(int(b) for b in d.get("boundary_faces", ()))
        g = SurfaceGraph(surface=d["surface"], vertex_color=colors,
                         edges=edges, faces=faces, boundary_faces=boundary)
    except (KeyError, TypeError, ValueError) as err:
        raise SchemaError("malformed graph JSON: %s" % err) from err
    problems = validate_surface_graph(g)
    if problems:
        raise SchemaError("graph fails validation: " + "; ".join(problems))
    return g


# -- patterns and drawings ---------------------------------------------------

def _periods_to_json(periods):
    if periods is None:
        return None
    return [complex_to_json(periods[0]), complex_to_json(periods[1])]


def _periods_from_json(v):
    if v is None:
        return None
    return (complex_from_json(v[0]), complex_from_json(v[1]))


def pattern_to_json(p: CirclePattern) -> Dict:
    out = {
        "graph": graph_to_json(p.graph),
        "vertices": {str(v): complex_to_json(z)
                     for v, z in p.vertex_points.items()},
        "centers": {str(f): complex_to_json(z)
                    for f, z in p.center_points.items()},
    }
    if p.periods is not None:
        out["periods"] = _periods_to_json(p.periods)
    return out


def pattern_from_json(d) -> CirclePattern:
    try:
        g = graph_from_json(d["graph"])
        vertices = {int(k): complex_from_json(v) for k, v in d["vertices"].items()}
        centers = {int(k): complex_from_json(v) for k, v in d["centers"].items()}
    except (KeyError, TypeError, AttributeError) as err:
        raise SchemaError("malformed pattern JSON: %s" % err) from err
    return CirclePattern(g, vertices, centers, _periods_from_json(d.get("periods")))


def drawing_to_json(d: FaceDrawing) -> Dict:
    out = {
        "graph": graph_to_json(d.graph),
        "centers": {str(f): complex_to_json(z) for f, z in d.values.items()},
    }
    if d.periods is not None:
        out["periods"] = _periods_to_json(d.periods)
    return out


def drawing_from_json(d) -> FaceDrawing:
    try:
        g = graph_from_json(d["graph"])
        centers = {int(k): complex_from_json(v) for k, v in d["centers"].items()}
    except (KeyError, TypeError, AttributeError) as err:
        raise SchemaError("malformed drawing JSON: %s" % err) from err
    return FaceDrawing(g, centers, _periods_from_json(d.get("periods")))


# -- edge weights -----------------------------------------------------------

def weights_to_json(w: Dict[int, float]) -> Dict:
    return {str(eid): float(v) for eid, v in w.items()}


def weights_from_json(d) -> Dict[int, float]:
    try:
        return {int(k): float(v) for k, v in d.items()}
    except (TypeError, ValueError, AttributeError) as err:
        raise SchemaError("malformed weights JSON: %s" % err) from err


# -- clifford configurations --------------------------------------------------

def _index_key(idx) -> str:
    return "".join(str(m) for m in sorted(idx))


def clifford_config_to_json(cfg) -> Dict:
    return {
        "n": cfg.n,
        "points": {_index_key(i): complex_to_json(z)
                   for i, z in cfg.points.items()},
        "circles": {_index_key(i): circle_to_json(c)
                    for i, c in cfg.circles.items()},
        "centers": {_index_key(i): complex_to_json(z)
                    for i, z in cfg.centers.items()},
    }


# -- octahedral patches -------------------------------------------------------

def patch_to_json(patch: OctahedralPatch) -> Dict:
    return {
        "window": [list(patch.window[0]), list(patch.window[1]),
                   list(patch.window[2])],
        "values": {"%d,%d,%d" % p: complex_to_json(z)
                   for p, z in patch.values.items()},
    }


def patch_from_json(d) -> OctahedralPatch:
    try:
        window = tuple((int(lo), int(hi)) for lo, hi in d["window"])
        if len(window) != 3:
            raise SchemaError("window needs three axis ranges")
        values = {}
        for key, v in d["values"].items():
            x, y, z = (int(part) for part in key.split(","))
            values[(x, y, z)] = complex_from_json(v)
    except (KeyError, TypeError, ValueError, AttributeError) as err:
        raise SchemaError("malformed patch JSON: %s" % err) from err
    return OctahedralPatch(window, values)
