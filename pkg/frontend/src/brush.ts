/**
 * Pointer-track resampling and color-picker math.
 *
 * A raw pointermove track fires far more often than the brush needs; one
 * stamp per brush radius of travel keeps strokes solid (adjacent discs
 * overlap) without flooding the server with redundant points.
 */

import type { Rgb } from "./state.js";

export type Point = [number, number];

/**
 * Thin a pointer track so consecutive kept points are at least `radius`
 * apart. The first point is always kept; later points are kept when their
 * distance from the last kept point reaches the radius.
 */
export function resampleTrack(track: Point[], radius: number): Point[] {
  if (radius < 1) {
    throw new Error(`radius must be >= 1, got ${radius}`);
  }
  if (track.length === 0) {
    return [];
  }
  const kept: Point[] = [track[0]];
  let [lastX, lastY] = track[0];
  for (const [x, y] of track.slice(1)) {
    if (Math.hypot(x - lastX, y - lastY) >= radius) {
      kept.push([x, y]);
      lastX = x;
      lastY = y;
    }
  }
  return kept;
}

/** Hue [0,360), saturation and value in [0,1] to 8-bit RGB. */
export function hsvToRgb(h: number, s: number, v: number): Rgb {
  const c = v * s;
  const hp = (((h % 360) + 360) % 360) / 60;
  const x = c * (1 - Math.abs((hp % 2) - 1));
  let rgb: [number, number, number];
  if (hp < 1) rgb = [c, x, 0];
  else if (hp < 2) rgb = [x, c, 0];
  else if (hp < 3) rgb = [0, c, x];
  else if (hp < 4) rgb = [0, x, c];
  else if (hp < 5) rgb = [x, 0, c];
  else rgb = [c, 0, x];
  const m = v - c;
  return [
    Math.round((rgb[0] + m) * 255),
    Math.round((rgb[1] + m) * 255),
    Math.round((rgb[2] + m) * 255),
  ];
}

/** 8-bit RGB to hue [0,360), saturation and value in [0,1]. */
export function rgbToHsv(rgb: Rgb): [number, number, number] {
  const r = rgb[0] / 255;
  const g = rgb[1] / 255;
  const b = rgb[2] / 255;
  const max = Math.max(r, g, b);
  const min = Math.min(r, g, b);
  const c = max - min;
  let h = 0;
  if (c > 0) {
    if (max === r) h = 60 * (((g - b) / c + 6) % 6);
    else if (max === g) h = 60 * ((b - r) / c + 2);
    else h = 60 * ((r - g) / c + 4);
  }
  return [h, max === 0 ? 0 : c / max, max];
}

/** Clamp a slider value to the session's brush range. */
export function clampRadius(radius: number, min: number, max: number): number {
  return Math.min(max, Math.max(min, Math.round(radius)));
}
