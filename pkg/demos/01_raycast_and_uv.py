"""
Casting screen rays at a sphere and reading back texture coordinates
====================================================================

Builds the default test sphere, frames it with a camera, and walks a few
screen pixels through the full pipeline: pixel -> ray -> triangle hit ->
interpolated uv -> texel address.
"""

import numpy as np

import uvlink

# a unit sphere with a standard latitude/longitude unwrap
mesh = uvlink.lat_long_sphere()
print(f"mesh: {mesh.vertex_count} vertices, {mesh.triangle_count} triangles")

# the acceleration index makes per-pixel casting cheap
accel = uvlink.build_accel(mesh)
print(f"accel: {len(accel.nodes)} nodes")

# frame the whole mesh from +z; this is the same default a session uses
camera = uvlink.default_camera(mesh)
print(f"camera at {np.round(camera.position, 3)}, viewport {camera.viewport}")

# cast through the viewport center and a ring of nearby pixels
for sx, sy in [(400, 400), (400, 300), (300, 400), (520, 430), (50, 50)]:
    ray = uvlink.screen_ray(camera, (sx, sy))
    hit = uvlink.ray_intersect(mesh, accel, ray)
    if hit is None:
        print(f"({sx:3d},{sy:3d})  miss")
        continue
    # the hit carries the interpolated uv; map it onto a 1024x1024 texture
    px, py = uvlink.uv_to_pixel(hit.uv, 1024, 1024)
    print(f"({sx:3d},{sy:3d})  tri {hit.triangle_index:3d}  t={hit.t:.4f}  "
          f"uv=({hit.uv[0]:.3f},{hit.uv[1]:.3f})  texel=({px},{py})")

# the same lookup works for arbitrary rays, not just screen pixels
ray = uvlink.Ray(origin=(3.0, 2.0, 3.0), direction=(-1.0, -0.66, -1.0))
hit = uvlink.ray_intersect(mesh, accel, ray)
print(f"oblique ray hits tri {hit.triangle_index} at distance {hit.t:.4f}")
