/**
 * Software preview of the textured mesh for the model view.
 *
 * Projects triangles through the same pinhole model the server uses for
 * screen rays (pixel centers, y down), depth-sorts them, and flat-shades
 * each with the texture color at its uv centroid. Good enough for painting
 * feedback; a GPU view can replace it without touching the protocol.
 */

import type { CameraParams, MeshData } from "./protocol.js";
import type { RasterBuffer } from "./raster.js";

export interface ProjectedTriangle {
  /** screen-space corners, in viewport pixels */
  points: [number, number][];
  /** mean camera-space depth along the view axis, for painter's sorting */
  depth: number;
  /** uv centroid, for texture sampling */
  uv: [number, number];
  index: number;
}

function sub(a: number[], b: number[]): [number, number, number] {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: number[], b: number[]): [number, number, number] {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function normalize(v: [number, number, number]): [number, number, number] {
  const n = Math.hypot(v[0], v[1], v[2]);
  return [v[0] / n, v[1] / n, v[2] / n];
}

function dot(a: number[], b: number[]): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/**
 * World point to viewport pixel coordinates plus view depth. Returns null
 * for points at or behind the eye plane.
 */
export function projectPoint(
  camera: CameraParams,
  point: number[],
): [number, number, number] | null {
  const forward = normalize(sub(camera.target, camera.position));
  const right = normalize(cross(forward, camera.up));
  const up = cross(right, forward);
  const rel = sub(point, [...camera.position]);
  const depth = dot(rel, forward);
  if (depth <= 1e-9) {
    return null;
  }
  const tanHalf = Math.tan((camera.vfov_degrees * Math.PI) / 360);
  const [w, h] = camera.viewport;
  const aspect = w / h;
  const ndcX = dot(rel, right) / (depth * tanHalf * aspect);
  const ndcY = dot(rel, up) / (depth * tanHalf);
  const sx = ((ndcX + 1) / 2) * w - 0.5;
  const sy = ((1 - ndcY) / 2) * h - 0.5;
  return [sx, sy, depth];
}

/** Project every triangle fully in front of the camera, far to near. */
export function projectMesh(mesh: MeshData, camera: CameraParams): ProjectedTriangle[] {
  const projected: ProjectedTriangle[] = [];
  mesh.triangles.forEach((tri, index) => {
    const corners: [number, number][] = [];
    let depthSum = 0;
    let u = 0;
    let v = 0;
    for (const vertex of tri) {
      const hit = projectPoint(camera, mesh.vertices[vertex]);
      if (hit === null) {
        return;
      }
      corners.push([hit[0], hit[1]]);
      depthSum += hit[2];
      u += mesh.uvs[vertex][0];
      v += mesh.uvs[vertex][1];
    }
    projected.push({
      points: corners,
      depth: depthSum / 3,
      uv: [u / 3, v / 3],
      index,
    });
  });
  projected.sort((a, b) => b.depth - a.depth);
  return projected;
}

/** Same uv-to-texel mapping the server paints with: v=1 is the top row. */
export function uvToPixel(uv: [number, number], width: number, height: number): [number, number] {
  const u = Math.min(1, Math.max(0, uv[0]));
  const v = Math.min(1, Math.max(0, uv[1]));
  return [
    Math.min(Math.floor(u * width), width - 1),
    Math.min(Math.floor((1 - v) * height), height - 1),
  ];
}

/** Flat-shade color for a projected triangle from the uv texture mirror. */
export function shade(tri: ProjectedTriangle, texture: RasterBuffer): [number, number, number, number] {
  const [px, py] = uvToPixel(tri.uv, texture.width, texture.height);
  return texture.pixel(px, py);
}
