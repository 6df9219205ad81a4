// Projection parity: the UI's own pinhole math must land within 1 px of the
// reference projections the engine ships with every primitive.

import { describe, expect, it } from "vitest";
import { arcPoints3 } from "../src/overlays.js";
import { project, Vec3 } from "../src/projection.js";
import { allGoldenSteps } from "./goldens.js";

const STEPS = allGoldenSteps();

function expectParity(
  camera: any,
  point: Vec3,
  ref: [number, number] | null,
  label: string,
): void {
  const hit = project(camera, point);
  if (ref === null) {
    expect(hit, label).toBeNull();
    return;
  }
  expect(hit, label).not.toBeNull();
  const du = Math.abs(hit!.u - ref[0]);
  const dv = Math.abs(hit!.v - ref[1]);
  expect(du, `${label} u off by ${du}`).toBeLessThan(1.0);
  expect(dv, `${label} v off by ${dv}`).toBeLessThan(1.0);
}

describe("projection parity against engine references", () => {
  it("covers both golden bundles", () => {
    const bundles = new Set(STEPS.map((s) => s.bundle));
    expect(bundles).toEqual(new Set(["printer-clean", "printer-reset"]));
    expect(STEPS.length).toBe(16);
  });

  for (const { bundle, doc } of STEPS) {
    it(`${bundle} step ${doc.step_index} (${doc.category})`, () => {
      for (const prim of doc.primitives) {
        const refs = prim.ref_projections;
        const label = `${bundle}/${doc.step_index}/${prim.kind}`;
        expectParity(doc.camera, prim.transform.position, refs["anchor"], `${label} anchor`);
        if (refs["corners"]) {
          for (const name of ["bl", "br", "tl", "tr"]) {
            expectParity(
              doc.camera,
              prim.payload["corners"][name] as Vec3,
              refs["corners"][name],
              `${label} corner ${name}`,
            );
          }
        }
        if (refs["start"] && prim.kind === "image_plane_animation") {
          expectParity(doc.camera, prim.payload["start"] as Vec3, refs["start"], `${label} start`);
          expectParity(doc.camera, prim.payload["end"] as Vec3, refs["end"], `${label} end`);
        }
        if (refs["start"] && prim.kind === "tool_placement" && prim.payload["motion"]) {
          const motion = prim.payload["motion"];
          expectParity(doc.camera, motion["start"] as Vec3, refs["start"], `${label} m-start`);
          expectParity(doc.camera, motion["end"] as Vec3, refs["end"], `${label} m-end`);
        }
        if (refs["arc"]) {
          const points = arcPoints3(prim.payload, refs["arc"].length);
          points.forEach((p, i) => {
            expectParity(doc.camera, p, refs["arc"][i], `${label} arc[${i}]`);
          });
        }
        if (refs["axis_tip"]) {
          const r = prim.transform.orientation;
          const pos = prim.transform.position;
          const tip: Vec3 = [
            pos[0] + 0.05 * r[1],
            pos[1] + 0.05 * r[4],
            pos[2] + 0.05 * r[7],
          ];
          expectParity(doc.camera, tip, refs["axis_tip"], `${label} axis tip`);
        }
      }
    });
  }

  it("every golden step carries at least one reference projection", () => {
    for (const { doc } of STEPS) {
      expect(doc.primitives.length).toBeGreaterThan(0);
      for (const prim of doc.primitives) {
        expect(prim.ref_projections["anchor"]).not.toBeUndefined();
      }
    }
  });
});
