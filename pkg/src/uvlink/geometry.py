"""Triangle meshes, ray casting, and coordinate mapping.

A Mesh keeps positions and texture coordinates in one unified index space:
``triangles[k]`` indexes both ``vertices`` and ``uvs``.  Importers are
responsible for duplicating positions that carry more than one UV.

Rays are cast through an AccelIndex (a median-split BVH).  Intersection uses
the Moeller-Trumbore test on both faces; among all hits in ``(0, max_t]``
the one with the smallest ``(t, triangle_index)`` wins, which makes results
independent of traversal order and reproducible against an exhaustive scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidMeshError, RangeError

#: Default raycast range in model units.
DEFAULT_MAX_T = 200.0

_DET_EPS = 1e-12       # parallel-ray rejection threshold
_BARY_EPS = 1e-9       # edge tolerance on barycentric weights
_PRUNE_EPS = 1e-9      # slack when pruning BVH nodes against the best hit
_LEAF_SIZE = 8
_HUGE = 1e300          # stands in for 1/0 in slab tests without producing NaN


class Mesh:
    """Triangle mesh with per-vertex positions and UV coordinates.

    Parameters are coerced to contiguous arrays: ``vertices`` (N, 3) float64,
    ``uvs`` (N, 2) float64, ``triangles`` (M, 3) integer.
    """

    def __init__(self, vertices, uvs, triangles):
        self.vertices = np.ascontiguousarray(vertices, dtype=np.float64).reshape(-1, 3)
        self.uvs = np.ascontiguousarray(uvs, dtype=np.float64).reshape(-1, 2)
        self.triangles = np.ascontiguousarray(triangles, dtype=np.int64).reshape(-1, 3)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def triangle_areas(self) -> np.ndarray:
        """Area of every triangle in position space."""
        p0, p1, p2 = (self.vertices[self.triangles[:, k]] for k in range(3))
        cross = np.cross(p1 - p0, p2 - p0)
        return 0.5 * np.linalg.norm(cross, axis=1)

    def validate(self) -> None:
        """Raise InvalidMeshError unless all mesh invariants hold."""
        if self.triangle_count < 1:
            raise InvalidMeshError("mesh has no triangles")
        if len(self.uvs) != len(self.vertices):
            raise InvalidMeshError(
                f"uv count {len(self.uvs)} != vertex count {len(self.vertices)}"
            )
        if self.triangles.min(initial=0) < 0 or self.triangles.max(initial=-1) >= self.vertex_count:
            raise InvalidMeshError("triangle index out of range")
        areas = self.triangle_areas()
        bad = np.nonzero(areas <= 0.0)[0]
        if len(bad):
            raise InvalidMeshError(f"{len(bad)} degenerate triangle(s), first at index {bad[0]}")

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


@dataclass
class Camera:
    """Pinhole camera: position/target/up plus vertical FOV and a pixel viewport."""

    position: np.ndarray
    target: np.ndarray
    up: np.ndarray
    vfov_degrees: float = 60.0
    viewport: tuple[int, int] = (800, 800)

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64).reshape(3)
        self.target = np.asarray(self.target, dtype=np.float64).reshape(3)
        up = np.asarray(self.up, dtype=np.float64).reshape(3)
        n = np.linalg.norm(up)
        if n == 0.0:
            raise ValueError("camera up vector has zero length")
        self.up = up / n
        if not 0.0 < self.vfov_degrees < 180.0:
            raise ValueError(f"vfov must be in (0, 180), got {self.vfov_degrees}")
        w, h = self.viewport
        if int(w) < 1 or int(h) < 1:
            raise ValueError(f"viewport must be at least 1x1, got {self.viewport}")
        self.viewport = (int(w), int(h))
        view = self.target - self.position
        if np.linalg.norm(view) == 0.0:
            raise ValueError("camera position equals target")
        if np.linalg.norm(np.cross(view / np.linalg.norm(view), self.up)) < 1e-9:
            raise ValueError("camera up is parallel to the view direction")


@dataclass
class Ray:
    """Half-line with unit direction.  The direction is normalized on construction."""

    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        self.origin = np.asarray(self.origin, dtype=np.float64).reshape(3)
        d = np.asarray(self.direction, dtype=np.float64).reshape(3)
        n = np.linalg.norm(d)
        if n == 0.0:
            raise ValueError("ray direction has zero length")
        self.direction = d / n


@dataclass
class Hit:
    """Nearest ray-mesh intersection: triangle, distance, weights, interpolated UV."""

    triangle_index: int
    t: float
    barycentric: tuple[float, float, float]
    uv: np.ndarray


class AccelIndex:
    """BVH over a mesh's triangles.

    Nodes are flat tuples ``(minx, miny, minz, maxx, maxy, maxz, left, right,
    start, count)``; leaves have ``start >= 0`` indexing into ``tri_order``.
    Triangle data is precomputed as plain float tuples
    ``(ax, ay, az, e1x, e1y, e1z, e2x, e2y, e2z)`` so the scalar intersection
    loop avoids numpy overhead.
    """

    def __init__(self, nodes, tri_order, tris):
        self.nodes = nodes
        self.tri_order = tri_order
        self.tris = tris

    @property
    def leaf_count(self) -> int:
        return sum(1 for n in self.nodes if n[8] >= 0)

    @property
    def node_count(self) -> int:
        return len(self.nodes)


def build_accel(mesh: Mesh) -> AccelIndex:
    """Build a deterministic BVH over ``mesh``.

    Median split on the longest centroid axis, stable ordering, leaves of at
    most 8 triangles.  Raises InvalidMeshError for meshes that violate the
    Mesh invariants (including the empty mesh).
    """
    mesh.validate()
    tri = mesh.triangles
    v = mesh.vertices
    p0, p1, p2 = v[tri[:, 0]], v[tri[:, 1]], v[tri[:, 2]]
    lo = np.minimum(np.minimum(p0, p1), p2)
    hi = np.maximum(np.maximum(p0, p1), p2)
    centroids = (p0 + p1 + p2) / 3.0

    nodes: list[tuple] = []
    tri_order: list[int] = []

    def build(idxs: np.ndarray) -> int:
        node_id = len(nodes)
        nodes.append(None)  # reserve; children are appended after us
        bmin = lo[idxs].min(axis=0)
        bmax = hi[idxs].max(axis=0)
        if len(idxs) <= _LEAF_SIZE:
            start = len(tri_order)
            tri_order.extend(int(i) for i in idxs)
            nodes[node_id] = (*bmin, *bmax, -1, -1, start, len(idxs))
            return node_id
        cmin = centroids[idxs].min(axis=0)
        cmax = centroids[idxs].max(axis=0)
        axis = int(np.argmax(cmax - cmin))
        order = np.argsort(centroids[idxs, axis], kind="stable")
        idxs = idxs[order]
        mid = len(idxs) // 2
        left = build(idxs[:mid])
        right = build(idxs[mid:])
        nodes[node_id] = (*bmin, *bmax, left, right, -1, 0)
        return node_id

    build(np.arange(len(tri), dtype=np.int64))

    e1 = p1 - p0
    e2 = p2 - p0
    tris = [
        (
            float(p0[i, 0]), float(p0[i, 1]), float(p0[i, 2]),
            float(e1[i, 0]), float(e1[i, 1]), float(e1[i, 2]),
            float(e2[i, 0]), float(e2[i, 1]), float(e2[i, 2]),
        )
        for i in range(len(tri))
    ]
    return AccelIndex(nodes, tri_order, tris)


def _intersect_triangle(tri_data, ox, oy, oz, dx, dy, dz, max_t):
    """Moeller-Trumbore against one precomputed triangle; both faces.

    Returns (t, u, v) for a hit with t in (0, max_t], else None.  Barycentric
    weights are accepted down to -1e-9 so shared edges register on both
    neighbouring triangles and the index tie-break stays deterministic.
    """
    ax, ay, az, e1x, e1y, e1z, e2x, e2y, e2z = tri_data
    pvx = dy * e2z - dz * e2y
    pvy = dz * e2x - dx * e2z
    pvz = dx * e2y - dy * e2x
    det = e1x * pvx + e1y * pvy + e1z * pvz
    if -_DET_EPS < det < _DET_EPS:
        return None
    inv = 1.0 / det
    tvx = ox - ax
    tvy = oy - ay
    tvz = oz - az
    u = (tvx * pvx + tvy * pvy + tvz * pvz) * inv
    if u < -_BARY_EPS or u > 1.0 + _BARY_EPS:
        return None
    qx = tvy * e1z - tvz * e1y
    qy = tvz * e1x - tvx * e1z
    qz = tvx * e1y - tvy * e1x
    vv = (dx * qx + dy * qy + dz * qz) * inv
    if vv < -_BARY_EPS or u + vv > 1.0 + _BARY_EPS:
        return None
    t = (e2x * qx + e2y * qy + e2z * qz) * inv
    if t <= 0.0 or t > max_t:
        return None
    return t, u, vv


def ray_intersect(mesh: Mesh, accel: AccelIndex, ray: Ray, max_t: float = DEFAULT_MAX_T) -> Hit | None:
    """Nearest hit of ``ray`` against the mesh within ``(0, max_t]``.

    Front- and back-faces both count.  Ties on t break toward the lowest
    triangle index.  Returns None on a miss.
    """
    ox, oy, oz = (float(c) for c in ray.origin)
    dx, dy, dz = (float(c) for c in ray.direction)
    ix = 1.0 / dx if dx != 0.0 else _HUGE
    iy = 1.0 / dy if dy != 0.0 else _HUGE
    iz = 1.0 / dz if dz != 0.0 else _HUGE

    nodes = accel.nodes
    tri_order = accel.tri_order
    tris = accel.tris
    best_t = math.inf
    best_idx = -1
    best_uv = (0.0, 0.0)
    stack = [0]
    while stack:
        node = nodes[stack.pop()]
        t1 = (node[0] - ox) * ix
        t2 = (node[3] - ox) * ix
        tnear = t1 if t1 < t2 else t2
        tfar = t2 if t1 < t2 else t1
        t1 = (node[1] - oy) * iy
        t2 = (node[4] - oy) * iy
        if t1 > t2:
            t1, t2 = t2, t1
        if t1 > tnear:
            tnear = t1
        if t2 < tfar:
            tfar = t2
        t1 = (node[2] - oz) * iz
        t2 = (node[5] - oz) * iz
        if t1 > t2:
            t1, t2 = t2, t1
        if t1 > tnear:
            tnear = t1
        if t2 < tfar:
            tfar = t2
        limit = best_t + _PRUNE_EPS
        if limit > max_t:
            limit = max_t
        if tnear > tfar or tfar < 0.0 or tnear > limit:
            continue
        start = node[8]
        if start >= 0:
            for tid in tri_order[start:start + node[9]]:
                res = _intersect_triangle(tris[tid], ox, oy, oz, dx, dy, dz, max_t)
                if res is None:
                    continue
                t, u, vv = res
                if t < best_t or (t == best_t and tid < best_idx):
                    best_t = t
                    best_idx = tid
                    best_uv = (u, vv)
        else:
            stack.append(node[7])
            stack.append(node[6])

    if best_idx < 0:
        return None
    u, vv = best_uv
    bary = (1.0 - u - vv, u, vv)
    return Hit(best_idx, best_t, bary, interpolate_uv(mesh, best_idx, bary))


def interpolate_uv(mesh: Mesh, triangle_index: int, barycentric) -> np.ndarray:
    """UV at a point of a triangle given its barycentric weights.

    A pure vertex weight such as (1, 0, 0) returns that vertex's stored UV
    bit-exactly.
    """
    if not 0 <= triangle_index < mesh.triangle_count:
        raise IndexError(
            f"triangle index {triangle_index} out of range [0, {mesh.triangle_count})"
        )
    ia, ib, ic = mesh.triangles[triangle_index]
    wa, wb, wc = (float(w) for w in barycentric)
    ua, va = mesh.uvs[ia]
    ub, vb = mesh.uvs[ib]
    uc, vc = mesh.uvs[ic]
    return np.array([wa * ua + wb * ub + wc * uc, wa * va + wb * vb + wc * vc])


def screen_ray(camera: Camera, screen_px) -> Ray:
    """Ray through the center of a viewport pixel of a pinhole camera.

    Pixel (0, 0) is the top-left corner; y grows downward.  Raises RangeError
    for pixels outside the viewport.
    """
    px, py = (int(c) for c in screen_px)
    w, h = camera.viewport
    if not (0 <= px < w and 0 <= py < h):
        raise RangeError(f"pixel ({px}, {py}) outside viewport {w}x{h}")
    forward = camera.target - camera.position
    forward = forward / np.linalg.norm(forward)
    right = np.cross(forward, camera.up)
    right = right / np.linalg.norm(right)
    up = np.cross(right, forward)
    tan_half = math.tan(math.radians(camera.vfov_degrees) / 2.0)
    aspect = w / h
    ndc_x = (px + 0.5) / w * 2.0 - 1.0
    ndc_y = 1.0 - (py + 0.5) / h * 2.0
    direction = forward + right * (ndc_x * tan_half * aspect) + up * (ndc_y * tan_half)
    return Ray(camera.position.copy(), direction)


def uv_to_pixel(uv, width: int, height: int) -> tuple[int, int]:
    """Map a UV coordinate to a pixel index on a width x height grid.

    v is flipped so v=1 lands on the top row (row 0); UVs outside [0, 1] are
    clamped.  Total function: every input maps to a valid pixel.
    """
    u, v = (float(c) for c in uv)
    u = 0.0 if u < 0.0 else (1.0 if u > 1.0 else u)
    v = 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)
    px = min(int(math.floor(u * width)), width - 1)
    py = min(int(math.floor((1.0 - v) * height)), height - 1)
    return px, py
