"""Procedurally generated test meshes."""

from __future__ import annotations

import math

import numpy as np

from .geometry import Mesh


def lat_long_sphere(lon_segments: int = 32, lat_segments: int = 16, radius: float = 1.0) -> Mesh:
    """Sphere from a latitude/longitude grid, poles at v=1 (north) and v=0.

    The seam column and the pole rows are duplicated so every vertex owns a
    single UV; the zero-area slivers that a naive grid would produce at the
    poles are dropped.  The default 32x16 grid yields 960 triangles.
    """
    if lon_segments < 3 or lat_segments < 2:
        raise ValueError("need at least 3 longitude and 2 latitude segments")
    rows, cols = lat_segments, lon_segments
    verts = np.empty(((rows + 1) * (cols + 1), 3))
    uvs = np.empty(((rows + 1) * (cols + 1), 2))
    for i in range(rows + 1):
        theta = math.pi * i / rows
        st, ct = math.sin(theta), math.cos(theta)
        for j in range(cols + 1):
            phi = 2.0 * math.pi * j / cols
            k = i * (cols + 1) + j
            verts[k] = (radius * st * math.cos(phi), radius * ct, radius * st * math.sin(phi))
            uvs[k] = (j / cols, 1.0 - i / rows)
    tris = []
    for i in range(rows):
        for j in range(cols):
            a = i * (cols + 1) + j
            b = (i + 1) * (cols + 1) + j
            c = (i + 1) * (cols + 1) + j + 1
            d = i * (cols + 1) + j + 1
            if i != rows - 1:  # (a, b, c) collapses at the south pole row
                tris.append((a, b, c))
            if i != 0:  # (a, c, d) collapses at the north pole row
                tris.append((a, c, d))
    triangles = np.array(tris, dtype=np.int64)
    # Dropping the pole slivers leaves two grid corners unreferenced; compact
    # them away so the mesh survives OBJ round trips with identical counts.
    used = np.unique(triangles)
    remap = np.zeros(len(verts), dtype=np.int64)
    remap[used] = np.arange(len(used))
    return Mesh(verts[used], uvs[used], remap[triangles])


def unit_quad() -> Mesh:
    """Two-triangle unit square in the z=0 plane, UVs matching xy."""
    verts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=np.float64)
    uvs = verts[:, :2].copy()
    tris = np.array([[0, 1, 2], [0, 2, 3]], dtype=np.int64)
    return Mesh(verts, uvs, tris)
