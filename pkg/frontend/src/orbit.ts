/**
 * Orbit camera: spherical coordinates around a target point, converted to
 * the wire camera parameters (position/target/up) for set_camera.
 */

import type { CameraParams } from "./protocol.js";

export interface OrbitState {
  target: [number, number, number];
  distance: number;
  /** radians around +y; 0 looks from +z toward the target */
  azimuth: number;
  /** radians above the horizon; positive looks down from above */
  elevation: number;
  vfovDegrees: number;
  viewport: [number, number];
}

const MAX_ELEVATION = Math.PI / 2 - 0.01; // keep the up vector well-defined

export function defaultOrbit(viewport: [number, number] = [800, 800]): OrbitState {
  return {
    target: [0, 0, 0],
    distance: 5.196,
    azimuth: 0,
    elevation: 0,
    vfovDegrees: 60,
    viewport,
  };
}

export function rotate(orbit: OrbitState, dAzimuth: number, dElevation: number): OrbitState {
  const elevation = Math.min(MAX_ELEVATION, Math.max(-MAX_ELEVATION, orbit.elevation + dElevation));
  let azimuth = (orbit.azimuth + dAzimuth) % (2 * Math.PI);
  if (azimuth < 0) {
    azimuth += 2 * Math.PI;
  }
  return { ...orbit, azimuth, elevation };
}

export function zoom(orbit: OrbitState, factor: number): OrbitState {
  if (factor <= 0) {
    throw new Error(`zoom factor must be positive, got ${factor}`);
  }
  return { ...orbit, distance: Math.max(0.05, orbit.distance * factor) };
}

/** The camera position implied by the orbit parameters. */
export function orbitPosition(orbit: OrbitState): [number, number, number] {
  const { target, distance, azimuth, elevation } = orbit;
  const horizontal = distance * Math.cos(elevation);
  return [
    target[0] + horizontal * Math.sin(azimuth),
    target[1] + distance * Math.sin(elevation),
    target[2] + horizontal * Math.cos(azimuth),
  ];
}

export function toCameraParams(orbit: OrbitState): CameraParams {
  return {
    position: orbitPosition(orbit),
    target: [...orbit.target],
    up: [0, 1, 0],
    vfov_degrees: orbit.vfovDegrees,
    viewport: [...orbit.viewport],
  };
}

/** Recover orbit parameters from a server camera, e.g. after get_state. */
export function fromCameraParams(camera: CameraParams): OrbitState {
  const dx = camera.position[0] - camera.target[0];
  const dy = camera.position[1] - camera.target[1];
  const dz = camera.position[2] - camera.target[2];
  const distance = Math.hypot(dx, dy, dz);
  let azimuth = Math.atan2(dx, dz);
  if (azimuth < 0) {
    azimuth += 2 * Math.PI; // same [0, 2pi) convention rotate() keeps
  }
  return {
    target: [...camera.target],
    distance,
    azimuth,
    elevation: Math.asin(distance === 0 ? 0 : dy / distance),
    vfovDegrees: camera.vfov_degrees,
    viewport: [...camera.viewport],
  };
}
