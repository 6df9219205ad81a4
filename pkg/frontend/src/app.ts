// DOM wiring: query form, fixture/upload snapshot pickers, canvas render
// loop, step list, navigation buttons, timer chip, error banner.

import { connect, Connection } from "./client.js";
import { Overlay, overlaysForStep } from "./overlays.js";
import { encodeBinaryFrame, makeQuery, SnapshotRef } from "./protocol.js";
import { chipText } from "./timer.js";
import {
  canAdvance,
  canGoBack,
  currentExport,
  initialViewState,
  navigate,
  reduce,
  ViewEvent,
  ViewState,
} from "./viewstate.js";

const FIXTURE_BUNDLES: Record<string, { scenes: string[] }> = {
  "printer-clean": { scenes: sceneIds(8) },
  "printer-reset": { scenes: sceneIds(8) },
};

function sceneIds(n: number): string[] {
  return Array.from({ length: n }, (_, i) => `scene${String(i + 1).padStart(2, "0")}`);
}

let state: ViewState = initialViewState();
let connection: Connection | null = null;
let nextSceneIndex = 1;
let frameImage: HTMLImageElement | null = null;
let frameImageFor: string | null = null;
let uploadCounter = 0;

const $ = (id: string) => document.getElementById(id)!;

function dispatch(event: ViewEvent): void {
  state = reduce(state, event);
  render();
}

function selectedBundle(): string {
  return ($("bundle") as HTMLSelectElement).value;
}

function fixtureSnapshot(sceneIndex: number): SnapshotRef {
  const bundle = selectedBundle();
  const scenes = FIXTURE_BUNDLES[bundle].scenes;
  const scene = scenes[Math.min(sceneIndex, scenes.length - 1)];
  return { fixture: { bundle, scene } };
}

async function uploadedSnapshot(): Promise<SnapshotRef | null> {
  const imageFile = ($("image-file") as HTMLInputElement).files?.[0];
  const depthFile = ($("depth-file") as HTMLInputElement).files?.[0];
  const metaFile = ($("meta-file") as HTMLInputElement).files?.[0];
  if (!imageFile || !depthFile || !metaFile || !connection) return null;
  const meta = JSON.parse(await metaFile.text());
  uploadCounter += 1;
  const imageId = `img-${uploadCounter}`;
  const depthId = `dep-${uploadCounter}`;
  connection.sendBinary(
    encodeBinaryFrame(imageId, "png", new Uint8Array(await imageFile.arrayBuffer())),
  );
  connection.sendBinary(
    encodeBinaryFrame(depthId, "depth_f32", new Uint8Array(await depthFile.arrayBuffer())),
  );
  return {
    scene_id: meta["scene_id"] ?? `upload-${uploadCounter}`,
    image_frame: imageId,
    depth_frame: depthId,
    meta,
  };
}

async function chooseSnapshot(): Promise<SnapshotRef | null> {
  const mode = ($("snapshot-mode") as HTMLSelectElement).value;
  if (mode === "upload") return uploadedSnapshot();
  const ref = fixtureSnapshot(nextSceneIndex);
  nextSceneIndex += 1;
  return ref;
}

function startSession(): void {
  const url = ($("server-url") as HTMLInputElement).value;
  const query = ($("query") as HTMLInputElement).value;
  nextSceneIndex = 1;
  state = initialViewState();
  connection = connect(url, dispatch);
  const opening = window.setInterval(async () => {
    if (state.connection === "open" && connection) {
      window.clearInterval(opening);
      const mode = ($("snapshot-mode") as HTMLSelectElement).value;
      const snapshot =
        mode === "upload" ? await uploadedSnapshot() : fixtureSnapshot(0);
      if (snapshot) {
        connection.send(makeQuery(query, snapshot, selectedBundle()));
      }
    } else if (state.connection === "failed" || state.connection === "closed") {
      window.clearInterval(opening);
    }
  }, 50);
}

async function onNavigate(direction: "advance" | "back"): Promise<void> {
  if (!connection) return;
  const snapshot = direction === "advance" ? await chooseSnapshot() : null;
  const intent = navigate(state, direction, snapshot);
  state = intent.state;
  if (intent.send) connection.send(intent.send);
  render();
}

function drawOverlay(ctx: CanvasRenderingContext2D, overlay: Overlay): void {
  ctx.save();
  ctx.strokeStyle = "#ff3b30";
  ctx.fillStyle = "#ff3b30";
  ctx.lineWidth = 2;
  switch (overlay.kind) {
    case "polyline": {
      ctx.strokeStyle = overlay.role === "arc" ? "#ffd60a" : "#ff3b30";
      ctx.beginPath();
      overlay.points.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
      if (overlay.closed) ctx.closePath();
      ctx.stroke();
      if (overlay.arrowhead) {
        ctx.beginPath();
        overlay.arrowhead.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
        ctx.stroke();
      }
      break;
    }
    case "sprite": {
      ctx.font = "20px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(overlay.label, overlay.at[0], overlay.at[1]);
      break;
    }
    case "image": {
      const img = new Image();
      img.src = `data:image/png;base64,${overlay.pngB64}`;
      ctx.globalAlpha = 0.9;
      ctx.drawImage(
        img,
        overlay.at[0] - overlay.widthPx / 2,
        overlay.at[1] - overlay.heightPx / 2,
        overlay.widthPx,
        overlay.heightPx,
      );
      break;
    }
    case "chip": {
      ctx.font = "16px monospace";
      const w = ctx.measureText(overlay.text).width + 16;
      ctx.fillStyle = "rgba(0,0,0,0.7)";
      ctx.fillRect(overlay.at[0] - w / 2, overlay.at[1] - 26, w, 22);
      ctx.fillStyle = "#fff";
      ctx.textAlign = "center";
      ctx.fillText(overlay.text, overlay.at[0], overlay.at[1] - 10);
      break;
    }
    case "tick": {
      ctx.strokeStyle = "#34c759";
      ctx.beginPath();
      ctx.moveTo(overlay.from[0], overlay.from[1]);
      ctx.lineTo(overlay.to[0], overlay.to[1]);
      ctx.stroke();
      break;
    }
    case "offscreen": {
      ctx.font = "24px sans-serif";
      ctx.fillText("➤", overlay.toward[0], overlay.toward[1]);
      break;
    }
  }
  ctx.restore();
}

function render(): void {
  $("status").textContent = state.connection;
  $("banner").textContent = state.banner ?? "";
  ($("banner") as HTMLElement).style.display = state.banner ? "block" : "none";
  $("toast").textContent = state.toast ?? "";
  ($("back") as HTMLButtonElement).disabled = !canGoBack(state);
  ($("advance") as HTMLButtonElement).disabled = !canAdvance(state);

  const list = $("steps");
  list.innerHTML = "";
  if (state.plan) {
    state.plan.instructions.forEach((instruction, i) => {
      const item = document.createElement("li");
      item.textContent = instruction;
      if (i === state.currentStep) item.className = "current";
      list.appendChild(item);
    });
  }
  const doc = currentExport(state);
  $("instruction").textContent = doc ? `${doc.step_index + 1}. ${doc.instruction}` : "";
}

function renderCanvas(timeS: number): void {
  const canvas = $("view") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const doc = currentExport(state);
  if (!doc) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    return;
  }
  if (frameImageFor !== `${doc.scene_id}:${doc.step_index}`) {
    frameImage = new Image();
    frameImage.src = `data:image/png;base64,${doc.frame_png_b64}`;
    frameImageFor = `${doc.scene_id}:${doc.step_index}`;
  }
  canvas.width = doc.camera.intrinsics.width;
  canvas.height = doc.camera.intrinsics.height;
  if (frameImage && frameImage.complete) {
    ctx.drawImage(frameImage, 0, 0);
  } else {
    ctx.fillStyle = "#222";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
  }
  const overlays = overlaysForStep(doc, timeS, chipText(state.timer));
  overlays.forEach((overlay) => drawOverlay(ctx, overlay));
}

export function start(): void {
  $("connect").addEventListener("click", startSession);
  $("advance").addEventListener("click", () => void onNavigate("advance"));
  $("back").addEventListener("click", () => void onNavigate("back"));
  const loop = (t: number) => {
    renderCanvas(t / 1000);
    requestAnimationFrame(loop);
  };
  requestAnimationFrame(loop);
  render();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
