// Pinhole projection over the camera block shipped in every step export.
// World frame: x right, y up, z toward the viewer; the camera looks along
// its local -z, pixel v grows downward.

export interface Intrinsics {
  fx: number;
  fy: number;
  cx: number;
  cy: number;
  width: number;
  height: number;
}

export interface Pose {
  rotation: number[]; // row-major 3x3, camera-to-world
  translation: number[]; // camera origin in world, meters
}

export interface Camera {
  intrinsics: Intrinsics;
  pose: Pose;
}

export type Vec3 = [number, number, number];

export const BEHIND_CAMERA_EPS = 1e-6;

export function toCameraFrame(pose: Pose, p: Vec3): Vec3 {
  const d: Vec3 = [
    p[0] - pose.translation[0],
    p[1] - pose.translation[1],
    p[2] - pose.translation[2],
  ];
  const r = pose.rotation;
  // transpose(R) * d
  return [
    r[0] * d[0] + r[3] * d[1] + r[6] * d[2],
    r[1] * d[0] + r[4] * d[1] + r[7] * d[2],
    r[2] * d[0] + r[5] * d[1] + r[8] * d[2],
  ];
}

export interface Projected {
  u: number;
  v: number;
  zCam: number; // camera-frame z (negative in front of the camera)
}

export function project(camera: Camera, p: Vec3): Projected | null {
  const cam = toCameraFrame(camera.pose, p);
  const z = cam[2];
  if (z >= -BEHIND_CAMERA_EPS) return null;
  const k = camera.intrinsics;
  return {
    u: k.cx + (k.fx * cam[0]) / -z,
    v: k.cy - (k.fy * cam[1]) / -z,
    zCam: z,
  };
}

export function pixelsPerMeter(camera: Camera, p: Vec3): number | null {
  const cam = toCameraFrame(camera.pose, p);
  if (cam[2] >= -BEHIND_CAMERA_EPS) return null;
  return camera.intrinsics.fx / -cam[2];
}

// -- vector helpers shared by the arc sampler --------------------------------

export function cross(a: Vec3, b: Vec3): Vec3 {
  return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
}

export function norm(a: Vec3): number {
  return Math.hypot(a[0], a[1], a[2]);
}

export function scale(a: Vec3, s: number): Vec3 {
  return [a[0] * s, a[1] * s, a[2] * s];
}

export function add(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

/** Right-handed frame (columns x, y, z) with the given +z; +x horizontal
 * unless z is parallel to world up. Mirrors the engine's construction. */
export function frameWithZ(zRaw: Vec3): { e1: Vec3; e2: Vec3; z: Vec3 } {
  const z = scale(zRaw, 1 / norm(zRaw));
  const up: Vec3 = [0, 1, 0];
  let x = cross(up, z);
  if (norm(x) < 1e-9) {
    const alt: Vec3 = Math.abs(z[0]) < 0.9 ? [1, 0, 0] : [0, 0, 1];
    x = cross(alt, z);
  }
  x = scale(x, 1 / norm(x));
  const y = cross(z, x);
  return { e1: x, e2: y, z };
}
