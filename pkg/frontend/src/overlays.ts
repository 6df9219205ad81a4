// Pure mapping from exported guidance primitives to 2D drawables over the
// saved frame: polylines, sprites, image billboards, text chips. The UI
// never mutates guidance; everything here derives from the export document.

import { add, Camera, frameWithZ, pixelsPerMeter, project, scale, Vec3 } from "./projection.js";

export const ARC_SAMPLES = 17;

export interface TransformDoc {
  position: Vec3;
  orientation: number[]; // row-major 3x3
  scale: [number, number, number];
}

export interface PrimitiveDoc {
  kind:
    | "box3d"
    | "particle_emitter"
    | "image_plane_animation"
    | "arc_arrow"
    | "gesture_placement"
    | "tool_placement"
    | "timer_widget";
  transform: TransformDoc;
  payload: Record<string, any>;
  ref_projections: Record<string, any>;
}

export interface StepExport {
  step_index: number;
  instruction: string;
  visual_type: number;
  category: string;
  scene_id: string;
  camera: Camera;
  frame_png_b64: string;
  primitives: PrimitiveDoc[];
}

export type Point2 = [number, number];

export type Overlay =
  | { kind: "polyline"; points: Point2[]; closed: boolean; role: string; arrowhead?: Point2[] }
  | { kind: "sprite"; at: Point2; label: string; role: string }
  | {
      kind: "image";
      at: Point2;
      widthPx: number;
      heightPx: number;
      pngB64: string;
      role: string;
    }
  | { kind: "chip"; at: Point2; text: string; role: string }
  | { kind: "tick"; from: Point2; to: Point2; role: string }
  | { kind: "offscreen"; toward: Point2; role: string };

function projectPoint(camera: Camera, p: Vec3): Point2 | null {
  const hit = project(camera, p);
  return hit === null ? null : [hit.u, hit.v];
}

/** Edge-of-screen indicator for primitives behind the camera plane. */
function offscreenIndicator(camera: Camera, p: Vec3): Overlay {
  const k = camera.intrinsics;
  // direction of the point in the camera's image plane; behind the camera
  // the x/-y signs still say which side the content left through
  const cam = cameraDirection(camera, p);
  const len = Math.hypot(cam[0], cam[1]) || 1;
  const dir: Point2 = [cam[0] / len, -cam[1] / len];
  const margin = 16;
  const cxy: Point2 = [k.width / 2, k.height / 2];
  const tx = dir[0] === 0 ? Infinity : (k.width / 2 - margin) / Math.abs(dir[0]);
  const ty = dir[1] === 0 ? Infinity : (k.height / 2 - margin) / Math.abs(dir[1]);
  const t = Math.min(tx, ty);
  return {
    kind: "offscreen",
    toward: [cxy[0] + dir[0] * t, cxy[1] + dir[1] * t],
    role: "offscreen",
  };
}

function cameraDirection(camera: Camera, p: Vec3): Vec3 {
  const r = camera.pose.rotation;
  const d: Vec3 = [
    p[0] - camera.pose.translation[0],
    p[1] - camera.pose.translation[1],
    p[2] - camera.pose.translation[2],
  ];
  return [
    r[0] * d[0] + r[3] * d[1] + r[6] * d[2],
    r[1] * d[0] + r[4] * d[1] + r[7] * d[2],
    r[2] * d[0] + r[5] * d[1] + r[8] * d[2],
  ];
}

/** Sample the arc polyline exactly like the engine: counterclockwise as seen
 * from the positive axis side, reversed point order for CW. */
export function arcPoints3(payload: Record<string, any>, n: number = ARC_SAMPLES): Vec3[] {
  const axis = payload["axis"] as Vec3;
  const center = payload["center"] as Vec3;
  const radius = payload["radius_m"] as number;
  const sweep = ((payload["sweep_deg"] as number) * Math.PI) / 180;
  const { e1, e2 } = frameWithZ(axis);
  const points: Vec3[] = [];
  for (let i = 0; i < n; i++) {
    const theta = -sweep / 2 + (sweep * i) / (n - 1);
    points.push(
      add(center, add(scale(e1, radius * Math.cos(theta)), scale(e2, radius * Math.sin(theta)))),
    );
  }
  if (payload["direction"] === "CW") points.reverse();
  return points;
}

function arrowheadAt(tip: Point2, prev: Point2): Point2[] {
  const dx = tip[0] - prev[0];
  const dy = tip[1] - prev[1];
  const len = Math.hypot(dx, dy) || 1;
  const ux = dx / len;
  const uy = dy / len;
  const size = 10;
  return [
    [tip[0] - size * ux + size * 0.5 * uy, tip[1] - size * uy - size * 0.5 * ux],
    tip,
    [tip[0] - size * ux - size * 0.5 * uy, tip[1] - size * uy + size * 0.5 * ux],
  ];
}

/** Position along a looping start->end animation at time t (seconds). */
export function animatedFraction(t: number, durationS: number, pauseS: number, loop: boolean): number {
  if (!loop) return Math.min(t / durationS, 1);
  const cycle = durationS + pauseS;
  const phase = ((t % cycle) + cycle) % cycle;
  return Math.min(phase / durationS, 1);
}

function lerp3(a: Vec3, b: Vec3, f: number): Vec3 {
  return [a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f, a[2] + (b[2] - a[2]) * f];
}

export function overlaysForPrimitive(
  prim: PrimitiveDoc,
  camera: Camera,
  timeS: number,
  timerText?: string,
): Overlay[] {
  const pos = prim.transform.position;
  switch (prim.kind) {
    case "box3d": {
      const c = prim.payload["corners"];
      const order = ["bl", "br", "tr", "tl"];
      const pts: Point2[] = [];
      for (const name of order) {
        const hit = projectPoint(camera, c[name] as Vec3);
        if (hit === null) return [offscreenIndicator(camera, pos)];
        pts.push(hit);
      }
      return [{ kind: "polyline", points: pts, closed: true, role: "box3d" }];
    }
    case "particle_emitter": {
      const hit = projectPoint(camera, pos);
      if (hit === null) return [offscreenIndicator(camera, pos)];
      return [{ kind: "sprite", at: hit, label: "✦", role: "particles" }];
    }
    case "image_plane_animation": {
      const start = prim.payload["start"] as Vec3;
      const end = prim.payload["end"] as Vec3;
      const f = animatedFraction(
        timeS,
        prim.payload["duration_s"] as number,
        prim.payload["pause_s"] as number,
        Boolean(prim.payload["loop"]),
      );
      const at3 = lerp3(start, end, f);
      const hit = projectPoint(camera, at3);
      if (hit === null) return [offscreenIndicator(camera, pos)];
      const ppm = pixelsPerMeter(camera, at3) ?? 0;
      return [
        {
          kind: "image",
          at: hit,
          widthPx: (prim.payload["plane_width_m"] as number) * ppm,
          heightPx: (prim.payload["plane_height_m"] as number) * ppm,
          pngB64: prim.payload["crop_png_b64"] as string,
          role: "moving-plane",
        },
      ];
    }
    case "arc_arrow": {
      const pts3 = arcPoints3(prim.payload);
      const pts: Point2[] = [];
      for (const p of pts3) {
        const hit = projectPoint(camera, p);
        if (hit === null) return [offscreenIndicator(camera, pos)];
        pts.push(hit);
      }
      const head = arrowheadAt(pts[pts.length - 1], pts[pts.length - 2]);
      return [{ kind: "polyline", points: pts, closed: false, role: "arc", arrowhead: head }];
    }
    case "gesture_placement":
    case "tool_placement": {
      let at3 = pos;
      const motion = prim.payload["motion"];
      if (prim.kind === "tool_placement" && motion) {
        const f = animatedFraction(
          timeS,
          motion["duration_s"] as number,
          motion["pause_s"] as number,
          Boolean(motion["loop"]),
        );
        at3 = lerp3(motion["start"] as Vec3, motion["end"] as Vec3, f);
      }
      const hit = projectPoint(camera, at3);
      if (hit === null) return [offscreenIndicator(camera, pos)];
      const label =
        prim.kind === "gesture_placement"
          ? `✋ ${String(prim.payload["gesture"])}`
          : `🔧 ${String(prim.payload["tool_name"])}`;
      const overlays: Overlay[] = [{ kind: "sprite", at: hit, label, role: prim.kind }];
      // orientation tick along the local +y axis (0.05 m, same as the
      // engine's reference axis_tip)
      const r = prim.transform.orientation;
      const tip3: Vec3 = [pos[0] + 0.05 * r[1], pos[1] + 0.05 * r[4], pos[2] + 0.05 * r[7]];
      const base = projectPoint(camera, pos);
      const tip = projectPoint(camera, tip3);
      if (base !== null && tip !== null) {
        overlays.push({ kind: "tick", from: base, to: tip, role: "orientation" });
      }
      return overlays;
    }
    case "timer_widget": {
      const hit = projectPoint(camera, pos);
      if (hit === null) return [offscreenIndicator(camera, pos)];
      return [{ kind: "chip", at: hit, text: timerText ?? "", role: "timer" }];
    }
  }
}

export function overlaysForStep(doc: StepExport, timeS: number, timerText?: string): Overlay[] {
  const out: Overlay[] = [];
  for (const prim of doc.primitives) {
    out.push(...overlaysForPrimitive(prim, doc.camera, timeS, timerText));
  }
  return out;
}
