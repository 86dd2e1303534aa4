import json

import numpy as np
import pytest

import uvlink
from uvlink import persistence
from uvlink.errors import FormatError


# ---------------------------------------------------------------------------
# OBJ import

def write(tmp_path, text, name="mesh.obj"):
    path = tmp_path / name
    path.write_text(text)
    return path


GOOD_QUAD = """
# a unit quad with one quad face
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
vt 0 0
vt 1 0
vt 1 1
vt 0 1
f 1/1 2/2 3/3 4/4
"""


def test_load_obj_fan_triangulates_quads(tmp_path):
    mesh = persistence.load_obj(write(tmp_path, GOOD_QUAD))
    assert mesh.triangle_count == 2
    assert mesh.vertex_count == 4
    assert np.array_equal(mesh.triangles, [[0, 1, 2], [0, 2, 3]])
    mesh.validate()


def test_load_obj_unifies_position_uv_pairs(tmp_path):
    # one position used with two different uvs must become two vertices
    text = """
v 0 0 0
v 1 0 0
v 0 1 0
vt 0 0
vt 1 0
vt 0 1
vt 0.5 0.5
f 1/1 2/2 3/3
f 1/4 2/2 3/3
"""
    mesh = persistence.load_obj(write(tmp_path, text))
    assert mesh.triangle_count == 2
    assert mesh.vertex_count == 4
    # the shared corners really are shared
    assert mesh.triangles[0][1] == mesh.triangles[1][1]
    assert mesh.triangles[0][2] == mesh.triangles[1][2]
    assert mesh.triangles[0][0] != mesh.triangles[1][0]


def test_load_obj_negative_indices(tmp_path):
    text = """
v 0 0 0
v 1 0 0
v 0 1 0
vt 0 0
vt 1 0
vt 0 1
f -3/-3 -2/-2 -1/-1
"""
    mesh = persistence.load_obj(write(tmp_path, text))
    assert mesh.triangle_count == 1
    assert np.allclose(mesh.uvs, [[0, 0], [1, 0], [0, 1]])


def test_load_obj_ignores_normals_groups_materials(tmp_path):
    text = """
mtllib whatever.mtl
o thing
g part
s off
usemtl mat
v 0 0 0
v 1 0 0
v 0 1 0
vn 0 0 1
vt 0 0
vt 1 0
vt 0 1
f 1/1/1 2/2/1 3/3/1
"""
    mesh = persistence.load_obj(write(tmp_path, text))
    assert mesh.triangle_count == 1


def test_load_obj_line_continuation(tmp_path):
    text = "v 0 0 0\nv 1 0 0\nv 0 \\\n1 0\nvt 0 0\nvt 1 0\nvt 0 1\nf 1/1 2/2 3/3\n"
    mesh = persistence.load_obj(write(tmp_path, text))
    assert mesh.vertices[2][1] == 1.0


def test_load_obj_rejects_no_uv_file(tmp_path):
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"
    with pytest.raises(FormatError, match="texture coordinate"):
        persistence.load_obj(write(tmp_path, text))


def test_load_obj_rejects_face_without_vt_reference(tmp_path):
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nf 1//1 2//1 3//1\n"
    with pytest.raises(FormatError, match="line 5"):
        persistence.load_obj(write(tmp_path, text))


def test_load_obj_reports_line_of_bad_float(tmp_path):
    text = "v 0 0 0\nv 1 zero 0\nv 0 1 0\nvt 0 0\nf 1/1 2/1 3/1\n"
    with pytest.raises(FormatError, match="line 2"):
        persistence.load_obj(write(tmp_path, text))


def test_load_obj_reports_line_of_out_of_range_index(tmp_path):
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nf 1/1 2/1 9/1\n"
    with pytest.raises(FormatError, match="line 5"):
        persistence.load_obj(write(tmp_path, text))


def test_load_obj_rejects_short_face(tmp_path):
    text = "v 0 0 0\nv 1 0 0\nvt 0 0\nf 1/1 2/1\n"
    with pytest.raises(FormatError, match="at least 3"):
        persistence.load_obj(write(tmp_path, text))


def test_load_obj_rejects_faceless_file(tmp_path):
    text = "v 0 0 0\nvt 0 0\n"
    with pytest.raises(FormatError, match="no faces"):
        persistence.load_obj(write(tmp_path, text))


def test_load_obj_missing_file():
    with pytest.raises(OSError):
        persistence.load_obj("/nonexistent/never.obj")


# ---------------------------------------------------------------------------
# OBJ export and the colored model

def test_save_load_obj_round_trip_exact(tmp_path, sphere):
    path = tmp_path / "sphere.obj"
    persistence.save_obj(sphere, path)
    back = persistence.load_obj(path)
    assert back.vertex_count == sphere.vertex_count
    assert back.triangle_count == sphere.triangle_count
    # per-corner geometry survives byte-for-byte thanks to repr formatting
    assert np.array_equal(back.vertices[back.triangles], sphere.vertices[sphere.triangles])
    assert np.array_equal(back.uvs[back.triangles], sphere.uvs[sphere.triangles])


def test_export_colored_model_writes_linked_artifacts(tmp_path, sphere):
    texture = np.full((32, 32, 4), 200, dtype=np.uint8)
    paths = persistence.export_colored_model(sphere, texture, tmp_path / "out")
    obj_text = paths["obj"].read_text()
    assert "mtllib model.mtl" in obj_text
    assert "usemtl painted" in obj_text
    assert "map_Kd texture.png" in paths["mtl"].read_text()
    assert np.array_equal(persistence.import_png(paths["texture"]), texture)
    back = persistence.load_obj(paths["obj"])
    assert back.vertex_count == sphere.vertex_count
    assert back.triangle_count == sphere.triangle_count


def test_export_colored_model_unwritable_target(tmp_path, sphere):
    blocker = tmp_path / "file"
    blocker.write_text("in the way")
    with pytest.raises(OSError):
        persistence.export_colored_model(
            sphere, np.zeros((4, 4, 4), dtype=np.uint8), blocker / "sub")


# ---------------------------------------------------------------------------
# PNG

def test_png_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(31)
    buffer = rng.integers(0, 256, size=(37, 23, 4), dtype=np.uint8)
    path = tmp_path / "x.png"
    persistence.export_png(buffer, path)
    assert np.array_equal(persistence.import_png(path), buffer)


def test_import_png_converts_rgb(tmp_path):
    from PIL import Image

    path = tmp_path / "rgb.png"
    Image.new("RGB", (5, 4), (10, 20, 30)).save(path)
    buffer = persistence.import_png(path)
    assert buffer.shape == (4, 5, 4)
    assert tuple(buffer[0, 0]) == (10, 20, 30, 255)


def test_export_png_rejects_wrong_dtype(tmp_path):
    with pytest.raises(ValueError):
        persistence.export_png(np.zeros((4, 4, 4), dtype=np.float64), tmp_path / "x.png")


def test_import_png_rejects_garbage(tmp_path):
    path = tmp_path / "bad.png"
    path.write_bytes(b"definitely not a png")
    with pytest.raises(OSError):
        persistence.import_png(path)


# ---------------------------------------------------------------------------
# relation files

@pytest.fixture
def populated_relations():
    relations = uvlink.RelationSet((300, 200), (128, 128), f=8.0)
    uvlink.save_group(relations, uvlink.RelationGroup(
        pic_points=[uvlink.MarkerPoint((10, 20), 3), uvlink.MarkerPoint((40, 50), 5)],
        word_points=[uvlink.MarkerPoint((64, 64), 2)],
        label_color=(255, 0, 0, 255),
    ))
    uvlink.save_group(relations, uvlink.RelationGroup(
        pic_points=[uvlink.MarkerPoint((200, 100), 4)],
        word_points=[uvlink.MarkerPoint((10, 10), 1), uvlink.MarkerPoint((20, 20), 1)],
    ))
    return relations


def test_relations_round_trip(tmp_path, populated_relations):
    path = tmp_path / "r.relations.json"
    persistence.save_relations(populated_relations, path)
    back = persistence.load_relations(path)
    assert persistence.relations_equal(populated_relations, back)
    assert back.groups == populated_relations.groups
    assert back._next_id == populated_relations._next_id


def test_load_relations_validates_expected_sizes(tmp_path, populated_relations):
    path = tmp_path / "r.relations.json"
    persistence.save_relations(populated_relations, path)
    persistence.load_relations(path, expected_image_size=(300, 200))
    with pytest.raises(FormatError, match="image canvas"):
        persistence.load_relations(path, expected_image_size=(301, 200))
    with pytest.raises(FormatError, match="uv canvas"):
        persistence.load_relations(path, expected_uv_size=(64, 64))


def relation_doc(populated_relations, tmp_path, mutate):
    path = tmp_path / "r.relations.json"
    persistence.save_relations(populated_relations, path)
    doc = json.loads(path.read_text())
    mutate(doc)
    path.write_text(json.dumps(doc))
    return path


@pytest.mark.parametrize("mutate,message", [
    (lambda d: d.update(version=2), "version"),
    (lambda d: d.pop("version"), "version"),
    (lambda d: d.update(extra_field=1), "unknown field"),
    (lambda d: d["groups"][0].update(surprise=True), "unknown field"),
    (lambda d: d["groups"][0]["pic_points"][0].update(z=3), "unknown field"),
    (lambda d: d["groups"][0].update(id=5), "strictly increasing"),
    (lambda d: d["groups"][0].update(pic_points=[]), "empty marker list"),
    (lambda d: d["groups"][0]["pic_points"][0].update(x=999), "outside canvas"),
    (lambda d: d.update(f=0), "f must be > 0"),
])
def test_load_relations_rejects_bad_documents(tmp_path, populated_relations, mutate, message):
    path = relation_doc(populated_relations, tmp_path, mutate)
    with pytest.raises((FormatError, uvlink.RangeError), match=message):
        persistence.load_relations(path)


def test_load_relations_rejects_non_json(tmp_path):
    path = tmp_path / "r.relations.json"
    path.write_text("{nope")
    with pytest.raises(FormatError, match="JSON"):
        persistence.load_relations(path)


def test_load_relations_reports_record_index(tmp_path, populated_relations):
    path = relation_doc(populated_relations, tmp_path,
                        lambda d: d["groups"][1].update(other=1))
    with pytest.raises(FormatError, match="record 1"):
        persistence.load_relations(path)


# ---------------------------------------------------------------------------
# script files

def script_doc(tmp_path, doc):
    path = tmp_path / "s.paintscript.json"
    path.write_text(json.dumps(doc))
    return path


def test_parse_script_preserves_order(tmp_path):
    path = script_doc(tmp_path, {"version": 1, "commands": [
        {"op": "set_color", "color": [255, 0, 0, 255]},
        {"op": "stroke_model_uv", "uvs": [[0.5, 0.5]]},
        {"op": "save_group"},
    ]})
    script = persistence.parse_script(path)
    assert [c.op for c in script.commands] == ["set_color", "stroke_model_uv", "save_group"]
    assert script.commands[0].params == {"color": [255, 0, 0, 255]}
    assert script.continue_on_error is False
    assert script.camera is None


def test_parse_script_header_fields(tmp_path):
    path = script_doc(tmp_path, {
        "version": 1,
        "continue_on_error": True,
        "camera": {"position": [0, 0, 5], "target": [0, 0, 0]},
        "commands": [],
    })
    script = persistence.parse_script(path)
    assert script.continue_on_error is True
    assert script.camera.position[2] == 5


@pytest.mark.parametrize("doc,message", [
    ({"version": 1, "commands": [{"op": "no_such_op"}]}, "record 0"),
    ({"version": 1, "commands": [{"op": "set_color"}, {"color": [1, 2, 3]}]}, "record 1"),
    ({"version": 1, "commands": "set_color"}, "list"),
    ({"version": 3, "commands": []}, "version"),
    ({"version": 1, "commands": [], "notes": "hi"}, "unknown field"),
    ({"version": 1, "camera": {"position": [0, 0]}, "commands": []}, "camera"),
])
def test_parse_script_rejects_bad_documents(tmp_path, doc, message):
    with pytest.raises(FormatError, match=message):
        persistence.parse_script(script_doc(tmp_path, doc))


def test_save_script_round_trip(tmp_path):
    script = uvlink.ScriptFile(
        commands=[uvlink.Command("set_brush_radius", {"radius": 4}),
                  uvlink.Command("revoke", {})],
        continue_on_error=True,
        camera=uvlink.Camera((0, 0, 5), (0, 0, 0), (0, 1, 0)),
    )
    path = tmp_path / "s.paintscript.json"
    persistence.save_script(script, path)
    back = persistence.parse_script(path)
    assert [c.op for c in back.commands] == ["set_brush_radius", "revoke"]
    assert back.commands[0].params == {"radius": 4}
    assert back.continue_on_error is True
    assert np.allclose(back.camera.position, (0, 0, 5))


def test_save_transcript_is_json(tmp_path, sphere, small_config, white_image):
    session = uvlink.new_session(small_config, sphere, white_image)
    transcript = uvlink.run_script(session, [
        uvlink.Command.set_color((255, 0, 0)),
        uvlink.Command.save_group(),
    ], continue_on_error=True)
    path = tmp_path / "t.json"
    persistence.save_transcript(transcript, path)
    doc = json.loads(path.read_text())
    assert doc["completed"] is True
    assert doc["failures"] == [1]
    assert doc["entries"][1]["error_code"] == "MISSING_DATA"
