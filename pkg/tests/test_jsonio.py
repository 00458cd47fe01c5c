import json

import pytest

from conftest import rectangular_torus_pattern
from miqueldyn.circle_pattern import FaceDrawing, validate_pattern
from miqueldyn.errors import SchemaError
from miqueldyn.geometry import Circle, INFINITY
from miqueldyn.jsonio import (canonical_dumps, circle_from_json, circle_to_json,
                              complex_from_json, complex_to_json, drawing_from_json,
                              drawing_to_json, graph_from_json, graph_to_json,
                              patch_from_json, patch_to_json, pattern_from_json,
                              pattern_to_json, read_json, weights_from_json,
                              weights_to_json, write_json_atomic)
from miqueldyn.lattice import OctahedralPatch, generate_kasteleyn_cauchy_data
from miqueldyn.surface_graph import (build_square_grid_patch,
                                     build_square_grid_torus)


def test_canonical_float_format():
    assert canonical_dumps(0.1) == "0.10000000000000001"
    assert canonical_dumps(1.0) == "1"
    assert canonical_dumps(-2.5) == "-2.5"
    assert canonical_dumps(True) == "true"
    assert canonical_dumps(None) == "null"
    assert canonical_dumps({"b": 1, "a": [2, "x"]}) == '{"a":[2,"x"],"b":1}'


def test_canonical_rejects_bad_values():
    with pytest.raises(SchemaError):
        canonical_dumps(float("nan"))
    with pytest.raises(SchemaError):
        canonical_dumps(float("inf"))
    with pytest.raises(SchemaError):
        canonical_dumps({1: "non-string key"})


def test_complex_round_trip():
    assert complex_to_json(1.5 - 2j) == [1.5, -2.0]
    assert complex_from_json([1.5, -2.0]) == 1.5 - 2j
    assert complex_to_json(INFINITY) == "inf"
    assert complex_from_json("inf") is INFINITY
    with pytest.raises(SchemaError):
        complex_from_json("nonsense")
    with pytest.raises(SchemaError):
        complex_from_json([1.0])


def test_circle_round_trip():
    c = Circle.make_circle(1 + 2j, 0.75)
    assert circle_from_json(circle_to_json(c)) == c
    line = Circle.make_line(0j, 3 + 1j)
    assert circle_from_json(circle_to_json(line)) == line
    with pytest.raises(SchemaError):
        circle_from_json({"kind": "blob"})
    with pytest.raises(SchemaError):
        circle_from_json({"kind": "line", "a": "inf", "b": [0.0, 0.0]})


def test_graph_round_trip_torus():
    g = build_square_grid_torus(2, 4)
    blob = graph_to_json(g)
    text = canonical_dumps(blob)
    g2 = graph_from_json(json.loads(text))
    assert canonical_dumps(graph_to_json(g2)) == text
    assert g2.surface == "torus"
    assert g2.vertex_color == g.vertex_color
    assert g2.edges == g.edges
    assert g2.faces == g.faces


def test_graph_round_trip_patch_keeps_boundary():
    g = build_square_grid_patch(2, 3)
    g2 = graph_from_json(graph_to_json(g))
    assert g2.boundary_faces == g.boundary_faces
    assert canonical_dumps(graph_to_json(g2)) == canonical_dumps(graph_to_json(g))


def test_graph_schema_errors():
    blob = graph_to_json(build_square_grid_torus(2, 2))
    broken = json.loads(canonical_dumps(blob))
    del broken["vertices"]
    with pytest.raises(SchemaError):
        graph_from_json(broken)

    broken = json.loads(canonical_dumps(blob))
    broken["faces"][0]["edge_cycle"][0][1] = 2
    with pytest.raises(SchemaError):
        graph_from_json(broken)

    # structurally parseable but fails dual-orientation validation
    broken = json.loads(canonical_dumps(blob))
    broken["vertices"][0]["color"] = broken["vertices"][1]["color"]
    with pytest.raises(SchemaError):
        graph_from_json(broken)


def test_pattern_round_trip_bytes():
    p = rectangular_torus_pattern([1.0, 1.3, 0.8, 0.9], [1.0, 0.7])
    text = canonical_dumps(pattern_to_json(p))
    p2 = pattern_from_json(json.loads(text))
    assert canonical_dumps(pattern_to_json(p2)) == text
    assert validate_pattern(p2) == []
    assert p2.periods == p.periods


def test_pattern_from_generator_round_trip():
    p = generate_kasteleyn_cauchy_data(2, 4, seed=11)
    text = canonical_dumps(pattern_to_json(p))
    p2 = pattern_from_json(json.loads(text))
    assert canonical_dumps(pattern_to_json(p2)) == text
    assert p2.vertex_points == p.vertex_points
    assert p2.center_points == p.center_points


def test_drawing_round_trip():
    p = generate_kasteleyn_cauchy_data(2, 2, seed=5)
    d = p.centers_drawing()
    text = canonical_dumps(drawing_to_json(d))
    d2 = drawing_from_json(json.loads(text))
    assert canonical_dumps(drawing_to_json(d2)) == text
    assert isinstance(d2, FaceDrawing)
    assert d2.values == d.values


def test_weights_round_trip():
    w = {0: 1.5, 3: 0.25, 7: 2.0}
    assert weights_from_json(weights_to_json(w)) == w
    with pytest.raises(SchemaError):
        weights_from_json({"3": "heavy"})


def test_patch_round_trip():
    patch = OctahedralPatch(
        window=((-1, 1), (-1, 1), (0, 1)),
        values={(0, 0, 0): 1 + 2j, (1, 1, 0): INFINITY, (1, 0, 1): -0.5j},
    )
    text = canonical_dumps(patch_to_json(patch))
    patch2 = patch_from_json(json.loads(text))
    assert patch2.window == patch.window
    assert patch2.values == patch.values
    assert canonical_dumps(patch_to_json(patch2)) == text


def test_atomic_write_and_read(tmp_path):
    target = tmp_path / "out.json"
    obj = pattern_to_json(rectangular_torus_pattern([1.0, 1.0], [1.0, 1.0]))
    write_json_atomic(str(target), obj)
    write_json_atomic(str(target), obj)
    raw = target.read_bytes()
    assert raw.endswith(b"\n")
    assert read_json(str(target)) == json.loads(raw.decode())
    assert list(tmp_path.iterdir()) == [target]
