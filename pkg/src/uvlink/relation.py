"""Marker-group correspondences between the image canvas and the UV canvas.

A RelationGroup pairs the marker points a creator painted on the 2D image
(pic_points) with the ones painted on the model's texture (word_points).  Any
number of groups may overlap on either side, so the mapping is many-to-many.
A user's fill tap matches every group that has an image marker strictly
closer than the distance threshold ``f``, and recolors all markers of every
matched group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .canvas import BrushStamp, PaintCanvas, rasterize_stamp
from .errors import MissingDataError, RangeError

#: Default fill-match distance threshold in image-canvas pixels.
DEFAULT_F = 8.0


@dataclass(frozen=True)
class MarkerPoint:
    """One recorded brush mark: canvas position and the radius it was made with."""

    position: tuple[int, int]
    radius: int

    def __post_init__(self):
        object.__setattr__(self, "position", (int(self.position[0]), int(self.position[1])))
        object.__setattr__(self, "radius", int(self.radius))
        if self.radius < 1:
            raise RangeError(f"marker radius must be >= 1, got {self.radius}")


@dataclass
class RelationGroup:
    """Corresponding marker lists: image-canvas pic_points, UV-canvas word_points."""

    id: int = -1
    pic_points: list[MarkerPoint] = field(default_factory=list)
    word_points: list[MarkerPoint] = field(default_factory=list)
    label_color: tuple[int, int, int, int] = (0, 0, 0, 255)

    def is_empty(self) -> bool:
        return not self.pic_points and not self.word_points


class RelationSet:
    """Ordered saved groups plus the distance threshold and canvas dimensions."""

    def __init__(self, image_size: tuple[int, int], uv_size: tuple[int, int],
                 f: float = DEFAULT_F):
        if not f > 0:
            raise RangeError(f"distance threshold f must be > 0, got {f}")
        self.f = float(f)
        self.image_size = (int(image_size[0]), int(image_size[1]))
        self.uv_size = (int(uv_size[0]), int(uv_size[1]))
        self.groups: list[RelationGroup] = []
        self._next_id = 0

    def __len__(self) -> int:
        return len(self.groups)


def record_image_marker(group: RelationGroup, stamp: BrushStamp) -> MarkerPoint:
    """Record a brush stamp on the image canvas as a pic point of ``group``."""
    marker = MarkerPoint(stamp.center, stamp.radius)
    group.pic_points.append(marker)
    return marker


def record_model_marker(group: RelationGroup, stamp: BrushStamp) -> MarkerPoint:
    """Record a brush stamp on the UV canvas as a word point of ``group``."""
    marker = MarkerPoint(stamp.center, stamp.radius)
    group.word_points.append(marker)
    return marker


def save_group(relations: RelationSet, group: RelationGroup) -> int:
    """Append ``group`` with the next id; both marker lists must be nonempty.

    All-or-nothing: a MissingDataError leaves the set untouched.  Returns the
    assigned id.
    """
    if len(group.pic_points) < 1 or len(group.word_points) < 1:
        missing = "pic_points" if not group.pic_points else "word_points"
        raise MissingDataError(f"missing data: {missing} is empty")
    group.id = relations._next_id
    relations._next_id += 1
    relations.groups.append(group)
    return group.id


def have_point(group: RelationGroup, pos: tuple[int, int], f: float) -> bool:
    """True iff some pic point lies strictly closer than ``f`` to ``pos``."""
    x, y = pos
    for marker in group.pic_points:
        mx, my = marker.position
        if math.hypot(mx - x, my - y) < f:
            return True
    return False


def lookup_groups(relations: RelationSet, pos: tuple[int, int]) -> list[int]:
    """Ids of every group matching ``pos`` under the set's threshold, ascending."""
    return [g.id for g in relations.groups if have_point(g, pos, relations.f)]


def fill(relations: RelationSet, pos: tuple[int, int], color,
         image_canvas: PaintCanvas, uv_canvas: PaintCanvas) -> list[int]:
    """Recolor every group matched at ``pos`` on both canvases.

    Each matched group's pic points are stamped onto the image canvas and its
    word points onto the UV canvas, as discs of the radius stored with each
    marker.  Fills land directly in the base layer (they are not revocable).
    Returns the matched ids; an empty list means nothing changed.
    """
    matched = lookup_groups(relations, pos)
    if not matched:
        return matched
    by_id = {g.id: g for g in relations.groups}
    for gid in matched:
        group = by_id[gid]
        for marker in group.pic_points:
            rasterize_stamp(image_canvas.base, BrushStamp(marker.position, marker.radius, color))
        for marker in group.word_points:
            rasterize_stamp(uv_canvas.base, BrushStamp(marker.position, marker.radius, color))
    return matched
