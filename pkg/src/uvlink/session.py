"""Deterministic command interpreter for the creator/user painting workflow.

A Session owns both canvases, the mesh with its spatial index, the camera,
and the relation set.  Commands are small data records; ``apply`` performs
exactly one state transition and reports what changed (counts, matched ids,
dirty rectangles), so identical command sequences replay to bit-identical
state.  Creator mode is for marking corresponding regions; User mode only
fills through saved relations.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import canvas as canvaslib
from . import geometry, relation
from .canvas import BrushStamp, PaintCanvas
from .errors import (
    FormatError,
    MissingDataError,
    ModeError,
    RangeError,
    UnsavedWorkWarning,
    UVLinkError,
)
from .geometry import Camera, Mesh


class Mode(enum.Enum):
    CREATOR = "creator"
    USER = "user"


@dataclass
class SessionConfig:
    """Tunables for a session; defaults follow the reference workflow."""

    uv_canvas_size: tuple[int, int] = (1024, 1024)
    f: float = relation.DEFAULT_F
    brush_min: int = canvaslib.MIN_RADIUS
    brush_max: int = canvaslib.MAX_RADIUS
    brush_default: int = canvaslib.MAX_RADIUS  # maximum brush by default
    pending_warn_threshold: int = canvaslib.DEFAULT_WARN_THRESHOLD
    max_t: float = geometry.DEFAULT_MAX_T

    def __post_init__(self):
        w, h = self.uv_canvas_size
        if int(w) < 1 or int(h) < 1:
            raise RangeError(f"uv canvas must be at least 1x1, got {w}x{h}")
        self.uv_canvas_size = (int(w), int(h))
        if not self.f > 0:
            raise RangeError(f"f must be > 0, got {self.f}")
        if not self.max_t > 0:
            raise RangeError(f"max_t must be > 0, got {self.max_t}")
        if self.pending_warn_threshold < 1:
            raise RangeError("pending_warn_threshold must be >= 1")
        if not 1 <= self.brush_min <= self.brush_max:
            raise RangeError(
                f"bad brush radius range [{self.brush_min}, {self.brush_max}]"
            )
        if not self.brush_min <= self.brush_default <= self.brush_max:
            raise RangeError(
                f"default radius {self.brush_default} outside "
                f"[{self.brush_min}, {self.brush_max}]"
            )


@dataclass
class Command:
    """One session command: an operation name plus its parameters."""

    op: str
    params: dict = field(default_factory=dict)

    @classmethod
    def set_mode(cls, mode) -> "Command":
        value = mode.value if isinstance(mode, Mode) else str(mode)
        return cls("set_mode", {"mode": value})

    @classmethod
    def set_color(cls, color) -> "Command":
        return cls("set_color", {"color": list(color)})

    @classmethod
    def set_brush_radius(cls, radius: int) -> "Command":
        return cls("set_brush_radius", {"radius": int(radius)})

    @classmethod
    def set_camera(cls, camera: Camera) -> "Command":
        return cls("set_camera", {"camera": camera_to_dict(camera)})

    @classmethod
    def stroke_model_screen(cls, points) -> "Command":
        return cls("stroke_model_screen", {"points": [list(p) for p in points]})

    @classmethod
    def stroke_model_uv(cls, uvs) -> "Command":
        return cls("stroke_model_uv", {"uvs": [list(p) for p in uvs]})

    @classmethod
    def stroke_image(cls, points) -> "Command":
        return cls("stroke_image", {"points": [list(p) for p in points]})

    @classmethod
    def revoke(cls) -> "Command":
        return cls("revoke")

    @classmethod
    def save_group(cls) -> "Command":
        return cls("save_group")

    @classmethod
    def fill(cls, point) -> "Command":
        return cls("fill", {"point": list(point)})

    @classmethod
    def export(cls, target: str, path: str) -> "Command":
        return cls("export", {"target": target, "path": str(path)})


@dataclass(frozen=True)
class DirtyRect:
    """Changed region of one canvas, in pixel coordinates."""

    canvas: str  # "image" or "uv"
    x: int
    y: int
    w: int
    h: int


@dataclass
class CommandResult:
    op: str
    data: dict
    dirty: list[DirtyRect] = field(default_factory=list)


@dataclass
class TranscriptEntry:
    index: int
    op: str
    ok: bool
    error: str | None = None
    error_code: str | None = None
    data: dict = field(default_factory=dict)


@dataclass
class Transcript:
    entries: list[TranscriptEntry] = field(default_factory=list)
    completed: bool = False

    @property
    def failures(self) -> list[int]:
        return [e.index for e in self.entries if not e.ok]

    @property
    def ok(self) -> bool:
        return self.completed and not self.failures


class Session:
    """Mutable painting state; drive it exclusively through ``apply``."""

    def __init__(self, config: SessionConfig, mesh: Mesh, accel, camera: Camera,
                 image_canvas: PaintCanvas, uv_canvas: PaintCanvas):
        self.config = config
        self.mesh = mesh
        self.accel = accel
        self.camera = camera
        self.image_canvas = image_canvas
        self.uv_canvas = uv_canvas
        self.mode = Mode.CREATOR
        self.relations = relation.RelationSet(
            (image_canvas.width, image_canvas.height),
            (uv_canvas.width, uv_canvas.height),
            f=config.f,
        )
        self.current_group = relation.RelationGroup()
        self.color = (0, 0, 0, 255)
        self.brush_radius = config.brush_default


def default_camera(mesh: Mesh, viewport=(800, 800)) -> Camera:
    """Front view framing the mesh bounds from +z."""
    lo, hi = mesh.bounds()
    center = (lo + hi) / 2.0
    radius = float(np.linalg.norm(hi - lo)) / 2.0
    distance = max(3.0 * radius, 1.0)
    return Camera(center + np.array([0.0, 0.0, distance]), center, (0.0, 1.0, 0.0),
                  vfov_degrees=60.0, viewport=viewport)


def new_session(config: SessionConfig, mesh: Mesh, image: np.ndarray,
                overlay: np.ndarray | None = None) -> Session:
    """Fresh session in Creator mode: white UV canvas, image canvas from ``image``."""
    accel = geometry.build_accel(mesh)  # validates the mesh
    image_canvas = canvaslib.canvas_from_image(
        image, overlay=overlay,
        max_radius=config.brush_max, warn_threshold=config.pending_warn_threshold,
    )
    uw, uh = config.uv_canvas_size
    uv_canvas = canvaslib.create_canvas(
        uw, uh, canvaslib.WHITE,
        max_radius=config.brush_max, warn_threshold=config.pending_warn_threshold,
    )
    return Session(config, mesh, accel, default_camera(mesh), image_canvas, uv_canvas)


def camera_to_dict(camera: Camera) -> dict:
    return {
        "position": [float(c) for c in camera.position],
        "target": [float(c) for c in camera.target],
        "up": [float(c) for c in camera.up],
        "vfov_degrees": float(camera.vfov_degrees),
        "viewport": [int(camera.viewport[0]), int(camera.viewport[1])],
    }


def camera_from_dict(data: dict) -> Camera:
    try:
        return Camera(
            data["position"], data["target"], data.get("up", (0.0, 1.0, 0.0)),
            vfov_degrees=float(data.get("vfov_degrees", 60.0)),
            viewport=tuple(data.get("viewport", (800, 800))),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad camera: {exc}") from None


def error_code(exc: BaseException) -> str:
    """Stable wire/transcript code for an exception."""
    if isinstance(exc, ModeError):
        return "MODE"
    if isinstance(exc, MissingDataError):
        return "MISSING_DATA"
    if isinstance(exc, RangeError):
        return "RANGE"
    if isinstance(exc, (FormatError, OSError)):
        return "IO"
    if isinstance(exc, (ValueError, KeyError, TypeError, IndexError)):
        return "BAD_REQUEST"
    return "INTERNAL"


def _merge_rects(rects) -> tuple[int, int, int, int] | None:
    """Bounding box of (x, y, w, h) rectangles, ignoring Nones."""
    boxes = [r for r in rects if r is not None]
    if not boxes:
        return None
    x0 = min(r[0] for r in boxes)
    y0 = min(r[1] for r in boxes)
    x1 = max(r[0] + r[2] for r in boxes)
    y1 = max(r[1] + r[3] for r in boxes)
    return (x0, y0, x1 - x0, y1 - y0)


def _dirty(canvas_name: str, rects) -> list[DirtyRect]:
    merged = _merge_rects(rects)
    if merged is None:
        return []
    return [DirtyRect(canvas_name, *merged)]


def _int_pair(value, what: str) -> tuple[int, int]:
    try:
        x, y = value
        return int(x), int(y)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad {what}: {value!r}") from exc


def _require_mode(session: Session, mode: Mode, op: str) -> None:
    if session.mode is not mode:
        raise ModeError(f"{op} requires {mode.value} mode (session is in {session.mode.value})")


def apply(session: Session, command: Command) -> CommandResult:
    """Apply one command, returning what changed.  Raises on rejection."""
    handler = _HANDLERS.get(command.op)
    if handler is None:
        raise ValueError(f"unknown command {command.op!r}")
    try:
        return handler(session, command.params)
    except KeyError as exc:
        raise ValueError(f"{command.op}: missing parameter {exc}") from None


def _cmd_set_mode(session: Session, params: dict) -> CommandResult:
    try:
        target = Mode(str(params["mode"]).lower())
    except (KeyError, ValueError):
        raise ValueError(f"bad mode {params.get('mode')!r}") from None
    dirty: list[DirtyRect] = []
    discarded = 0
    if target is not session.mode and target is Mode.USER:
        # Entering User mode drops unsaved work; saved groups are untouched.
        for name, cv in (("image", session.image_canvas), ("uv", session.uv_canvas)):
            rects = [canvaslib.stamp_bbox(cv, s) for s in cv.pending]
            discarded += canvaslib.revoke_pending(cv)
            dirty += _dirty(name, rects)
        if discarded or not session.current_group.is_empty():
            warnings.warn(
                f"switching to user mode discarded {discarded} pending stamp(s) "
                "and the unsaved marker group",
                UnsavedWorkWarning,
                stacklevel=3,
            )
        session.current_group = relation.RelationGroup()
    session.mode = target
    return CommandResult("set_mode", {"mode": target.value, "discarded": discarded}, dirty)


def _cmd_set_color(session: Session, params: dict) -> CommandResult:
    color = canvaslib.coerce_color(params["color"])
    if color[3] != 255:
        raise ValueError(f"paint colors are opaque; got alpha {color[3]}")
    session.color = color
    return CommandResult("set_color", {"color": list(color)})


def _cmd_set_brush_radius(session: Session, params: dict) -> CommandResult:
    radius = int(params["radius"])
    cfg = session.config
    if not cfg.brush_min <= radius <= cfg.brush_max:
        raise RangeError(
            f"brush radius {radius} outside [{cfg.brush_min}, {cfg.brush_max}]"
        )
    session.brush_radius = radius
    return CommandResult("set_brush_radius", {"radius": radius})


def _cmd_set_camera(session: Session, params: dict) -> CommandResult:
    camera = params["camera"]
    if not isinstance(camera, Camera):
        camera = camera_from_dict(dict(camera))
    session.camera = camera
    return CommandResult("set_camera", {"camera": camera_to_dict(camera)})


def _paint_uv_pixel(session: Session, px: int, py: int, rects: list) -> None:
    stamp = BrushStamp((px, py), session.brush_radius, session.color)
    canvaslib.add_pending_stamp(session.uv_canvas, stamp)
    relation.record_model_marker(session.current_group, stamp)
    rects.append(canvaslib.stamp_bbox(session.uv_canvas, stamp))


def _cmd_stroke_model_screen(session: Session, params: dict) -> CommandResult:
    _require_mode(session, Mode.CREATOR, "stroke_model_screen")
    points = [_int_pair(p, "screen point") for p in params["points"]]
    uw, uh = session.uv_canvas.width, session.uv_canvas.height
    rects: list = []
    missed = 0
    for point in points:
        ray = geometry.screen_ray(session.camera, point)
        hit = geometry.ray_intersect(session.mesh, session.accel, ray, session.config.max_t)
        if hit is None:
            missed += 1
            continue
        px, py = geometry.uv_to_pixel(hit.uv, uw, uh)
        _paint_uv_pixel(session, px, py, rects)
    return CommandResult(
        "stroke_model_screen",
        {"stamped": len(points) - missed, "missed": missed,
         "pending_uv": len(session.uv_canvas.pending)},
        _dirty("uv", rects),
    )


def _cmd_stroke_model_uv(session: Session, params: dict) -> CommandResult:
    _require_mode(session, Mode.CREATOR, "stroke_model_uv")
    uw, uh = session.uv_canvas.width, session.uv_canvas.height
    rects: list = []
    count = 0
    for uv in params["uvs"]:
        u, v = (float(c) for c in uv)
        px, py = geometry.uv_to_pixel((u, v), uw, uh)
        _paint_uv_pixel(session, px, py, rects)
        count += 1
    return CommandResult(
        "stroke_model_uv",
        {"stamped": count, "pending_uv": len(session.uv_canvas.pending)},
        _dirty("uv", rects),
    )


def _cmd_stroke_image(session: Session, params: dict) -> CommandResult:
    _require_mode(session, Mode.CREATOR, "stroke_image")
    cv = session.image_canvas
    points = [_int_pair(p, "image point") for p in params["points"]]
    for x, y in points:
        if not (0 <= x < cv.width and 0 <= y < cv.height):
            raise RangeError(
                f"image point ({x}, {y}) outside canvas {cv.width}x{cv.height}"
            )
    rects: list = []
    for point in points:
        stamp = BrushStamp(point, session.brush_radius, session.color)
        canvaslib.add_pending_stamp(cv, stamp)
        relation.record_image_marker(session.current_group, stamp)
        rects.append(canvaslib.stamp_bbox(cv, stamp))
    return CommandResult(
        "stroke_image",
        {"stamped": len(points), "pending_image": len(cv.pending)},
        _dirty("image", rects),
    )


def _cmd_revoke(session: Session, params: dict) -> CommandResult:
    _require_mode(session, Mode.CREATOR, "revoke")
    dirty: list[DirtyRect] = []
    removed = {}
    for name, cv in (("image", session.image_canvas), ("uv", session.uv_canvas)):
        rects = [canvaslib.stamp_bbox(cv, s) for s in cv.pending]
        removed[name] = canvaslib.revoke_pending(cv)
        dirty += _dirty(name, rects)
    cleared = len(session.current_group.pic_points) + len(session.current_group.word_points)
    session.current_group = relation.RelationGroup()
    return CommandResult(
        "revoke",
        {"removed_image": removed["image"], "removed_uv": removed["uv"],
         "markers_cleared": cleared},
        dirty,
    )


def _cmd_save_group(session: Session, params: dict) -> CommandResult:
    _require_mode(session, Mode.CREATOR, "save_group")
    group = session.current_group
    group.label_color = session.color
    gid = relation.save_group(session.relations, group)  # raises before any mutation
    committed_image = canvaslib.commit_pending(session.image_canvas)
    committed_uv = canvaslib.commit_pending(session.uv_canvas)
    session.current_group = relation.RelationGroup()
    return CommandResult(
        "save_group",
        {"group_id": gid, "pic_points": len(group.pic_points),
         "word_points": len(group.word_points),
         "committed_image": committed_image, "committed_uv": committed_uv},
    )


def _cmd_fill(session: Session, params: dict) -> CommandResult:
    _require_mode(session, Mode.USER, "fill")
    point = _int_pair(params["point"], "fill point")
    matched = relation.fill(session.relations, point, session.color,
                            session.image_canvas, session.uv_canvas)
    dirty: list[DirtyRect] = []
    if matched:
        by_id = {g.id: g for g in session.relations.groups}
        image_rects = []
        uv_rects = []
        for gid in matched:
            group = by_id[gid]
            for m in group.pic_points:
                image_rects.append(canvaslib.stamp_bbox(
                    session.image_canvas, BrushStamp(m.position, m.radius, session.color)))
            for m in group.word_points:
                uv_rects.append(canvaslib.stamp_bbox(
                    session.uv_canvas, BrushStamp(m.position, m.radius, session.color)))
        dirty = _dirty("image", image_rects) + _dirty("uv", uv_rects)
    return CommandResult("fill", {"matched": matched}, dirty)


def _cmd_export(session: Session, params: dict) -> CommandResult:
    from . import persistence  # deferred: persistence imports this module

    target = str(params["target"])
    path = params["path"]
    if target == "image":
        persistence.export_png(canvaslib.composite(session.image_canvas), path)
        data = {"target": target, "path": str(path)}
    elif target == "uv":
        persistence.export_png(canvaslib.composite(session.uv_canvas), path)
        data = {"target": target, "path": str(path)}
    elif target == "relations":
        persistence.save_relations(session.relations, path)
        data = {"target": target, "path": str(path)}
    elif target == "model":
        paths = persistence.export_colored_model(
            session.mesh, canvaslib.composite(session.uv_canvas), path)
        data = {"target": target, "paths": {k: str(v) for k, v in paths.items()}}
    else:
        raise ValueError(f"unknown export target {target!r}")
    return CommandResult("export", data)


_HANDLERS = {
    "set_mode": _cmd_set_mode,
    "set_color": _cmd_set_color,
    "set_brush_radius": _cmd_set_brush_radius,
    "set_camera": _cmd_set_camera,
    "stroke_model_screen": _cmd_stroke_model_screen,
    "stroke_model_uv": _cmd_stroke_model_uv,
    "stroke_image": _cmd_stroke_image,
    "revoke": _cmd_revoke,
    "save_group": _cmd_save_group,
    "fill": _cmd_fill,
    "export": _cmd_export,
}

#: Command names understood by ``apply``.
COMMAND_OPS = frozenset(_HANDLERS)


def run_script(session: Session, commands, continue_on_error: bool = False) -> Transcript:
    """Apply commands in order, recording one transcript entry per command.

    The first failure aborts the script (its entry records the error) unless
    ``continue_on_error`` is set.  Identical scripts on identical inputs
    produce bit-identical canvases and relation sets.
    """
    transcript = Transcript()
    for index, command in enumerate(commands):
        try:
            result = apply(session, command)
        except (UVLinkError, ValueError, KeyError, TypeError, OSError) as exc:
            transcript.entries.append(TranscriptEntry(
                index, command.op, ok=False, error=str(exc), error_code=error_code(exc)))
            if not continue_on_error:
                return transcript
        else:
            transcript.entries.append(TranscriptEntry(
                index, command.op, ok=True, data=result.data))
    transcript.completed = True
    return transcript
