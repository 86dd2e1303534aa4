"""Paintable RGBA canvas: committed base, revocable pending stamps, overlay.

A PaintCanvas mirrors the painting surface split the workflow needs: brush
marks start out as pending stamps that can be revoked all at once, and a save
merges them into the base buffer.  The composite puts an optional line-art
overlay on top; the overlay is display-only and never takes part in marker
recording or fill hit-testing.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import PendingStampWarning, RangeError

#: Inclusive brush radius bounds in pixels.
MIN_RADIUS = 1
MAX_RADIUS = 32

#: Pending stamp count above which add_pending_stamp warns (soft limit; the
#: canvas keeps accepting stamps).
DEFAULT_WARN_THRESHOLD = 3000

WHITE = (255, 255, 255, 255)

_disc_masks: dict[int, np.ndarray] = {}


def coerce_color(color) -> tuple[int, int, int, int]:
    c = tuple(int(v) for v in color)
    if len(c) == 3:
        c = c + (255,)
    if len(c) != 4:
        raise ValueError(f"color must have 3 or 4 components, got {color!r}")
    if any(not 0 <= v <= 255 for v in c):
        raise ValueError(f"color components must be in [0, 255], got {color!r}")
    return c


@dataclass(frozen=True)
class BrushStamp:
    """One circular brush mark: center pixel, radius, opaque color.

    The center may lie outside the canvas; rasterization clips.  Paint colors
    are opaque by contract, so a non-255 alpha is rejected.
    """

    center: tuple[int, int]
    radius: int
    color: tuple[int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "center", (int(self.center[0]), int(self.center[1])))
        object.__setattr__(self, "radius", int(self.radius))
        object.__setattr__(self, "color", coerce_color(self.color))
        if self.radius < MIN_RADIUS:
            raise RangeError(f"brush radius must be >= {MIN_RADIUS}, got {self.radius}")
        if self.color[3] != 255:
            raise ValueError(f"stamp colors are opaque; got alpha {self.color[3]}")


class PaintCanvas:
    """RGBA pixel grid with a committed base layer and revocable pending stamps."""

    def __init__(self, width, height, base, background_color, overlay=None,
                 max_radius=MAX_RADIUS, warn_threshold=DEFAULT_WARN_THRESHOLD):
        self.width = width
        self.height = height
        self.base = base
        self.background_color = background_color
        self.overlay = overlay
        self.pending: list[BrushStamp] = []
        self.max_radius = max_radius
        self.warn_threshold = warn_threshold


def create_canvas(width: int, height: int, background=WHITE, overlay=None, *,
                  max_radius: int = MAX_RADIUS,
                  warn_threshold: int = DEFAULT_WARN_THRESHOLD) -> PaintCanvas:
    """New canvas with the base filled by ``background`` and no pending stamps."""
    width, height = int(width), int(height)
    if width < 1 or height < 1:
        raise ValueError(f"canvas must be at least 1x1, got {width}x{height}")
    background = coerce_color(background)
    base = np.empty((height, width, 4), dtype=np.uint8)
    base[:, :] = background
    canvas = PaintCanvas(width, height, base, background,
                         max_radius=max_radius, warn_threshold=warn_threshold)
    if overlay is not None:
        set_overlay(canvas, overlay)
    return canvas


def canvas_from_image(image: np.ndarray, overlay=None, **kwargs) -> PaintCanvas:
    """Canvas whose base is a copy of an existing (H, W, 4) uint8 image."""
    image = _as_rgba(image)
    h, w = image.shape[:2]
    canvas = create_canvas(w, h, **kwargs)
    canvas.base = image.copy()
    if overlay is not None:
        set_overlay(canvas, overlay)
    return canvas


def _as_rgba(buffer) -> np.ndarray:
    buffer = np.asarray(buffer)
    if buffer.ndim != 3 or buffer.shape[2] != 4 or buffer.dtype != np.uint8:
        raise ValueError(f"expected (H, W, 4) uint8 buffer, got {buffer.shape} {buffer.dtype}")
    return buffer


def set_overlay(canvas: PaintCanvas, overlay: np.ndarray) -> None:
    """Replace the overlay; dimensions must match the canvas exactly."""
    overlay = _as_rgba(overlay)
    if overlay.shape[:2] != (canvas.height, canvas.width):
        raise ValueError(
            f"overlay is {overlay.shape[1]}x{overlay.shape[0]}, "
            f"canvas is {canvas.width}x{canvas.height}"
        )
    canvas.overlay = overlay.copy()


def add_pending_stamp(canvas: PaintCanvas, stamp: BrushStamp) -> int:
    """Append a revocable stamp; returns the new pending count.

    Warns (PendingStampWarning) the first time the count crosses the canvas's
    warn threshold; painting continues regardless.
    """
    if stamp.radius > canvas.max_radius:
        raise RangeError(
            f"brush radius {stamp.radius} exceeds the canvas maximum {canvas.max_radius}"
        )
    canvas.pending.append(stamp)
    count = len(canvas.pending)
    if count == canvas.warn_threshold + 1:
        warnings.warn(
            f"pending stamp count {count} exceeds the soft limit of "
            f"{canvas.warn_threshold}; consider saving",
            PendingStampWarning,
            stacklevel=2,
        )
    return count


def revoke_pending(canvas: PaintCanvas) -> int:
    """Drop every pending stamp (the base is untouched); returns how many."""
    removed = len(canvas.pending)
    canvas.pending.clear()
    return removed


def commit_pending(canvas: PaintCanvas) -> int:
    """Rasterize pending stamps into the base in insertion order and clear them.

    The composite image is pixel-identical before and after a commit.
    """
    count = len(canvas.pending)
    for stamp in canvas.pending:
        rasterize_stamp(canvas.base, stamp)
    canvas.pending.clear()
    return count


def _disc_mask(radius: int) -> np.ndarray:
    """Boolean (2r+1)^2 mask of integer points within euclidean distance r."""
    mask = _disc_masks.get(radius)
    if mask is None:
        span = np.arange(-radius, radius + 1)
        mask = span[:, None] ** 2 + span[None, :] ** 2 <= radius * radius
        _disc_masks[radius] = mask
    return mask


def rasterize_stamp(buffer: np.ndarray, stamp: BrushStamp) -> tuple[int, int, int, int] | None:
    """Paint a hard-edged opaque disc into ``buffer``.

    Sets every pixel whose integer coordinates lie within euclidean distance
    ``radius`` of the center; parts outside the buffer are clipped.  Returns
    the touched (x, y, w, h) rectangle, or None if fully clipped.
    """
    h, w = buffer.shape[:2]
    cx, cy = stamp.center
    r = stamp.radius
    x0, x1 = max(cx - r, 0), min(cx + r + 1, w)
    y0, y1 = max(cy - r, 0), min(cy + r + 1, h)
    if x0 >= x1 or y0 >= y1:
        return None
    mask = _disc_mask(r)[y0 - (cy - r):y1 - (cy - r), x0 - (cx - r):x1 - (cx - r)]
    region = buffer[y0:y1, x0:x1]
    region[mask] = stamp.color
    return (x0, y0, x1 - x0, y1 - y0)


def stamp_bbox(canvas: PaintCanvas, stamp: BrushStamp) -> tuple[int, int, int, int] | None:
    """Clipped bounding rectangle a stamp would touch, without painting."""
    cx, cy = stamp.center
    r = stamp.radius
    x0, x1 = max(cx - r, 0), min(cx + r + 1, canvas.width)
    y0, y1 = max(cy - r, 0), min(cy + r + 1, canvas.height)
    if x0 >= x1 or y0 >= y1:
        return None
    return (x0, y0, x1 - x0, y1 - y0)


def composite(canvas: PaintCanvas) -> np.ndarray:
    """Base, then pending stamps in order, then the overlay blended on top.

    Pure function of the canvas state: repeated calls return bit-identical
    buffers and never mutate the canvas.
    """
    out = canvas.base.copy()
    for stamp in canvas.pending:
        rasterize_stamp(out, stamp)
    if canvas.overlay is not None:
        _blend_over(out, canvas.overlay)
    return out


def _blend_over(dst: np.ndarray, src: np.ndarray) -> None:
    """Alpha-blend ``src`` over ``dst`` in place.

    out_rgb = src_rgb*a + dst_rgb*(1-a); out_a = src_a + dst_a*(1-a).  Fully
    transparent source pixels leave dst bit-exact, fully opaque ones replace it.
    """
    a = src[:, :, 3:4].astype(np.float64) / 255.0
    rgb = src[:, :, :3].astype(np.float64) * a + dst[:, :, :3].astype(np.float64) * (1.0 - a)
    alpha = src[:, :, 3].astype(np.float64) + dst[:, :, 3].astype(np.float64) * (1.0 - a[:, :, 0])
    dst[:, :, :3] = np.rint(rgb).astype(np.uint8)
    dst[:, :, 3] = np.rint(np.clip(alpha, 0.0, 255.0)).astype(np.uint8)
