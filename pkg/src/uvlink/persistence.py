"""File formats: OBJ meshes, PNG textures, relation sets, command scripts.

Geometry interchange is Wavefront OBJ with an MTL sidecar; relation sets and
scripts are versioned JSON.  Every parser reports failures with a location
(line number or record index) instead of crashing, and every format
round-trips losslessly at the level its consumers need.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import FormatError
from .geometry import Camera, Mesh
from .relation import MarkerPoint, RelationGroup, RelationSet
from .session import COMMAND_OPS, Command, camera_from_dict, camera_to_dict

RELATION_FORMAT_VERSION = 1
SCRIPT_FORMAT_VERSION = 1


# ---------------------------------------------------------------------------
# OBJ import/export

def load_obj(path) -> Mesh:
    """Parse an OBJ file into a Mesh with a unified index space.

    Faces with more than three vertices are fan-triangulated.  Each distinct
    (position, uv) pair becomes one vertex, duplicating positions that carry
    several UVs.  Meshes without texture coordinates are rejected: a UV map
    is a hard requirement.
    """
    path = Path(path)
    positions: list[tuple[float, float, float]] = []
    texcoords: list[tuple[float, float]] = []
    pair_index: dict[tuple[int, int], int] = {}
    out_vertices: list[tuple[float, float, float]] = []
    out_uvs: list[tuple[float, float]] = []
    triangles: list[tuple[int, int, int]] = []

    def resolve(idx: int, count: int, what: str, line_no: int) -> int:
        # OBJ indices are 1-based; negatives count back from the current end
        resolved = idx - 1 if idx > 0 else count + idx
        if not 0 <= resolved < count:
            raise FormatError(f"{what} index {idx} out of range", line=line_no)
        return resolved

    def unify(v_idx: int, vt_idx: int) -> int:
        key = (v_idx, vt_idx)
        unified = pair_index.get(key)
        if unified is None:
            unified = len(out_vertices)
            pair_index[key] = unified
            out_vertices.append(positions[v_idx])
            out_uvs.append(texcoords[vt_idx])
        return unified

    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        raw_lines = fh.read().splitlines()

    line_no = 0
    total = len(raw_lines)
    i = 0
    while i < total:
        line = raw_lines[i]
        line_no = i + 1
        i += 1
        while line.endswith("\\") and i < total:  # logical line continuation
            line = line[:-1] + " " + raw_lines[i]
            i += 1
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword, args = tokens[0], tokens[1:]
        if keyword == "v":
            if len(args) < 3:
                raise FormatError("vertex needs 3 coordinates", line=line_no)
            try:
                positions.append(tuple(float(a) for a in args[:3]))
            except ValueError:
                raise FormatError(f"bad vertex coordinates {args!r}", line=line_no) from None
        elif keyword == "vt":
            if len(args) < 2:
                raise FormatError("texture coordinate needs 2 components", line=line_no)
            try:
                texcoords.append(tuple(float(a) for a in args[:2]))
            except ValueError:
                raise FormatError(f"bad texture coordinates {args!r}", line=line_no) from None
        elif keyword == "f":
            if len(args) < 3:
                raise FormatError("face needs at least 3 vertices", line=line_no)
            corners = []
            for ref in args:
                fields = ref.split("/")
                if len(fields) < 2 or not fields[1]:
                    raise FormatError(
                        f"face vertex {ref!r} has no texture coordinate "
                        "(a UV-mapped mesh is required)",
                        line=line_no,
                    )
                try:
                    v_raw, vt_raw = int(fields[0]), int(fields[1])
                except ValueError:
                    raise FormatError(f"bad face vertex {ref!r}", line=line_no) from None
                v_idx = resolve(v_raw, len(positions), "vertex", line_no)
                vt_idx = resolve(vt_raw, len(texcoords), "texture", line_no)
                corners.append(unify(v_idx, vt_idx))
            for k in range(2, len(corners)):
                triangles.append((corners[0], corners[k - 1], corners[k]))
        # vn, o, g, s, usemtl, mtllib and friends are irrelevant here.

    if not texcoords:
        raise FormatError("no texture coordinates (vt) in file; a UV map is required")
    if not triangles:
        raise FormatError("no faces in file")
    return Mesh(np.array(out_vertices), np.array(out_uvs), np.array(triangles, dtype=np.int64))


def save_obj(mesh: Mesh, path, mtl_name: str | None = None, material: str = "painted") -> None:
    """Write a mesh as OBJ with matching v/vt indices per face corner."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        if mtl_name:
            fh.write(f"mtllib {mtl_name}\n")
        for x, y, z in mesh.vertices:
            # repr of a Python float is the shortest exact representation
            fh.write(f"v {float(x)!r} {float(y)!r} {float(z)!r}\n")
        for u, v in mesh.uvs:
            fh.write(f"vt {float(u)!r} {float(v)!r}\n")
        if mtl_name:
            fh.write(f"usemtl {material}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"f {a + 1}/{a + 1} {b + 1}/{b + 1} {c + 1}/{c + 1}\n")


def export_colored_model(mesh: Mesh, texture: np.ndarray, out_dir) -> dict[str, Path]:
    """Write OBJ + MTL + texture PNG so any standard viewer shows the paint.

    Returns the written paths keyed by "obj", "mtl", "texture".  Re-importing
    the OBJ yields identical triangle and vertex counts.
    """
    out_dir = Path(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    obj_path = out_dir / "model.obj"
    mtl_path = out_dir / "model.mtl"
    tex_path = out_dir / "texture.png"
    export_png(texture, tex_path)
    with open(mtl_path, "w", encoding="utf-8") as fh:
        fh.write("newmtl painted\nKa 1 1 1\nKd 1 1 1\n")
        fh.write(f"map_Kd {tex_path.name}\n")
    save_obj(mesh, obj_path, mtl_name=mtl_path.name)
    return {"obj": obj_path, "mtl": mtl_path, "texture": tex_path}


# ---------------------------------------------------------------------------
# PNG import/export

def export_png(buffer: np.ndarray, path) -> None:
    """Lossless RGBA PNG write of an (H, W, 4) uint8 buffer."""
    buffer = np.asarray(buffer)
    if buffer.ndim != 3 or buffer.shape[2] != 4 or buffer.dtype != np.uint8:
        raise ValueError(f"expected (H, W, 4) uint8 buffer, got {buffer.shape} {buffer.dtype}")
    Image.fromarray(buffer, "RGBA").save(path, format="PNG")


def import_png(path) -> np.ndarray:
    """Read any PNG into an (H, W, 4) uint8 RGBA buffer, alpha preserved."""
    with Image.open(path) as img:
        return np.asarray(img.convert("RGBA")).copy()


# ---------------------------------------------------------------------------
# Relation sets

def save_relations(relations: RelationSet, path) -> None:
    doc = {
        "version": RELATION_FORMAT_VERSION,
        "f": relations.f,
        "image_canvas": {"width": relations.image_size[0], "height": relations.image_size[1]},
        "uv_canvas": {"width": relations.uv_size[0], "height": relations.uv_size[1]},
        "groups": [
            {
                "id": g.id,
                "label_color": list(g.label_color),
                "pic_points": [_marker_to_json(m) for m in g.pic_points],
                "word_points": [_marker_to_json(m) for m in g.word_points],
            }
            for g in relations.groups
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _marker_to_json(marker: MarkerPoint) -> dict:
    return {"x": marker.position[0], "y": marker.position[1], "radius": marker.radius}


def _marker_from_json(data: dict, size: tuple[int, int], record: int) -> MarkerPoint:
    _reject_unknown(data, {"x", "y", "radius"}, record)
    try:
        marker = MarkerPoint((int(data["x"]), int(data["y"])), int(data["radius"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad marker point: {exc}", record=record) from None
    x, y = marker.position
    if not (0 <= x < size[0] and 0 <= y < size[1]):
        raise FormatError(
            f"marker ({x}, {y}) outside canvas {size[0]}x{size[1]}", record=record)
    return marker


def _reject_unknown(data: dict, allowed: set, record=None) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise FormatError(f"unknown field(s) {sorted(unknown)}", record=record)


def _size_from_json(data, what: str) -> tuple[int, int]:
    try:
        return int(data["width"]), int(data["height"])
    except (KeyError, TypeError, ValueError):
        raise FormatError(f"bad {what} dimensions: {data!r}") from None


def load_relations(path, expected_image_size=None, expected_uv_size=None) -> RelationSet:
    """Load a version-1 relation file; the inverse of save_relations.

    Unknown fields are rejected (there is no forward compatibility at
    version 1).  When expected canvas sizes are given, a mismatch raises
    FormatError so stale files cannot be attached to the wrong session.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("relation file must be a JSON object")
    version = doc.get("version")
    if version != RELATION_FORMAT_VERSION:
        raise FormatError(f"unsupported relation file version {version!r}")
    _reject_unknown(doc, {"version", "f", "image_canvas", "uv_canvas", "groups"})
    image_size = _size_from_json(doc.get("image_canvas", {}), "image canvas")
    uv_size = _size_from_json(doc.get("uv_canvas", {}), "uv canvas")
    for expected, actual, name in (
        (expected_image_size, image_size, "image"),
        (expected_uv_size, uv_size, "uv"),
    ):
        if expected is not None and tuple(expected) != actual:
            raise FormatError(
                f"{name} canvas is {actual[0]}x{actual[1]} in the file, "
                f"session expects {expected[0]}x{expected[1]}"
            )
    relations = RelationSet(image_size, uv_size, f=float(doc.get("f", 0)))
    last_id = -1
    for record, entry in enumerate(doc.get("groups", [])):
        if not isinstance(entry, dict):
            raise FormatError("group record must be an object", record=record)
        _reject_unknown(entry, {"id", "label_color", "pic_points", "word_points"}, record)
        try:
            gid = int(entry["id"])
            label = tuple(int(c) for c in entry.get("label_color", (0, 0, 0, 255)))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad group record: {exc}", record=record) from None
        if gid <= last_id:
            raise FormatError(f"group ids must be strictly increasing, got {gid}", record=record)
        last_id = gid
        group = RelationGroup(
            id=gid,
            pic_points=[_marker_from_json(m, image_size, record) for m in entry.get("pic_points", [])],
            word_points=[_marker_from_json(m, uv_size, record) for m in entry.get("word_points", [])],
            label_color=label,
        )
        if not group.pic_points or not group.word_points:
            raise FormatError("saved group has an empty marker list", record=record)
        relations.groups.append(group)
    relations._next_id = last_id + 1
    return relations


def relations_equal(a: RelationSet, b: RelationSet) -> bool:
    """Structural equality: f, dimensions, and every group's points and ids."""
    return (
        a.f == b.f
        and a.image_size == b.image_size
        and a.uv_size == b.uv_size
        and a.groups == b.groups
    )


# ---------------------------------------------------------------------------
# Command scripts

@dataclass
class ScriptFile:
    """Parsed script: header plus commands in file order."""

    commands: list[Command] = field(default_factory=list)
    version: int = SCRIPT_FORMAT_VERSION
    continue_on_error: bool = False
    camera: Camera | None = None


def parse_script(path) -> ScriptFile:
    """Parse a JSON command script.

    Each record must name a known command op; everything else in the record
    becomes that command's parameters.  Unknown ops and malformed records
    fail with their record index.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("script file must be a JSON object")
    version = doc.get("version")
    if version != SCRIPT_FORMAT_VERSION:
        raise FormatError(f"unsupported script version {version!r}")
    _reject_unknown(doc, {"version", "continue_on_error", "camera", "commands"})
    script = ScriptFile(
        version=version,
        continue_on_error=bool(doc.get("continue_on_error", False)),
        camera=camera_from_dict(doc["camera"]) if "camera" in doc else None,
    )
    records = doc.get("commands", [])
    if not isinstance(records, list):
        raise FormatError("'commands' must be a list")
    for record, entry in enumerate(records):
        if not isinstance(entry, dict) or "op" not in entry:
            raise FormatError("command record must be an object with an 'op'", record=record)
        params = dict(entry)
        op = params.pop("op")
        if op not in COMMAND_OPS:
            raise FormatError(f"unknown command {op!r}", record=record)
        script.commands.append(Command(op, params))
    return script


def save_script(script: ScriptFile, path) -> None:
    doc: dict = {"version": script.version}
    if script.continue_on_error:
        doc["continue_on_error"] = True
    if script.camera is not None:
        doc["camera"] = camera_to_dict(script.camera)
    doc["commands"] = [{"op": c.op, **c.params} for c in script.commands]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def save_transcript(transcript, path) -> None:
    """Write a run transcript as JSON for inspection."""
    doc = {
        "completed": transcript.completed,
        "failures": transcript.failures,
        "entries": [dataclasses.asdict(e) for e in transcript.entries],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
