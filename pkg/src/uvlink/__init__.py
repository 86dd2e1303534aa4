"""uvlink: paint 3D models through 2D image regions.

The package links two raster canvases, a front-view image and a model's UV
texture, through saved groups of marker points, so coloring near a marker
on the image recolors the matching region of the texture.  Geometry support
(ray casting against UV-mapped meshes) turns screen strokes into texture
stamps; a command interpreter makes whole sessions scriptable and
replayable; a small TCP protocol serves live sessions to interactive
clients.
"""

from .canvas import (
    BrushStamp,
    PaintCanvas,
    add_pending_stamp,
    canvas_from_image,
    commit_pending,
    composite,
    create_canvas,
    rasterize_stamp,
    revoke_pending,
)
from .errors import (
    FormatError,
    InvalidMeshError,
    MissingDataError,
    ModeError,
    PendingStampWarning,
    RangeError,
    UnsavedWorkWarning,
    UVLinkError,
)
from .geometry import (
    AccelIndex,
    Camera,
    Hit,
    Mesh,
    Ray,
    build_accel,
    interpolate_uv,
    ray_intersect,
    screen_ray,
    uv_to_pixel,
)
from .persistence import (
    ScriptFile,
    export_colored_model,
    export_png,
    import_png,
    load_obj,
    load_relations,
    parse_script,
    save_obj,
    save_relations,
    save_script,
)
from .relation import (
    DEFAULT_F,
    MarkerPoint,
    RelationGroup,
    RelationSet,
    fill,
    lookup_groups,
    save_group,
)
from .server import ServeClient, UVLinkServer
from .session import (
    Command,
    CommandResult,
    DirtyRect,
    Mode,
    Session,
    SessionConfig,
    Transcript,
    apply,
    camera_from_dict,
    default_camera,
    new_session,
    run_script,
)
from .shapes import lat_long_sphere, unit_quad

__version__ = "0.1.0"

__all__ = [
    "AccelIndex",
    "BrushStamp",
    "Camera",
    "Command",
    "CommandResult",
    "DEFAULT_F",
    "DirtyRect",
    "FormatError",
    "Hit",
    "InvalidMeshError",
    "MarkerPoint",
    "Mesh",
    "MissingDataError",
    "Mode",
    "ModeError",
    "PaintCanvas",
    "PendingStampWarning",
    "RangeError",
    "Ray",
    "RelationGroup",
    "RelationSet",
    "ScriptFile",
    "ServeClient",
    "Session",
    "SessionConfig",
    "Transcript",
    "UVLinkError",
    "UVLinkServer",
    "UnsavedWorkWarning",
    "add_pending_stamp",
    "apply",
    "build_accel",
    "camera_from_dict",
    "canvas_from_image",
    "commit_pending",
    "composite",
    "create_canvas",
    "default_camera",
    "export_colored_model",
    "export_png",
    "fill",
    "import_png",
    "interpolate_uv",
    "lat_long_sphere",
    "load_obj",
    "load_relations",
    "lookup_groups",
    "new_session",
    "parse_script",
    "rasterize_stamp",
    "ray_intersect",
    "revoke_pending",
    "run_script",
    "save_group",
    "save_obj",
    "save_relations",
    "save_script",
    "screen_ray",
    "unit_quad",
    "uv_to_pixel",
]
