// gr/1 control messages and binary-frame encoding, WebSocket flavor:
// control messages travel as text frames, binary frames as binary frames
// ([u16 BE id length][id utf8][u8 kind length][kind utf8][payload]).

export const PROTOCOL_VERSION = "gr/1";

export type FrameKind = "png" | "depth_f32";

export interface ServerMessage {
  kind: "plan_ready" | "guidance_ready" | "timer_tick" | "error";
  session_id: string;
  payload: Record<string, unknown>;
  version: string;
}

export interface PlanReadyPayload {
  current_step: number;
  step_count: number;
  instructions: string[];
  visual_types?: number[];
  device_hint?: string | null;
  compiled_steps?: number[];
}

export interface TimerTickPayload {
  step_index: number;
  remaining_seconds: number;
  expired: boolean;
}

export interface SnapshotRef {
  fixture?: { bundle: string; scene: string };
  scene_id?: string;
  image_frame?: string;
  depth_frame?: string;
  meta?: Record<string, unknown>;
}

export class ProtocolVersionError extends Error {}

export function parseServerMessage(text: string): ServerMessage {
  let doc: Record<string, unknown>;
  try {
    doc = JSON.parse(text) as Record<string, unknown>;
  } catch (err) {
    throw new Error(`server sent non-JSON control message: ${err}`);
  }
  if (doc["version"] !== PROTOCOL_VERSION) {
    throw new ProtocolVersionError(
      `server speaks ${String(doc["version"])}, this client speaks ${PROTOCOL_VERSION}`,
    );
  }
  const kind = doc["kind"];
  if (
    kind !== "plan_ready" &&
    kind !== "guidance_ready" &&
    kind !== "timer_tick" &&
    kind !== "error"
  ) {
    throw new Error(`unexpected server message kind ${String(kind)}`);
  }
  return {
    kind,
    session_id: String(doc["session_id"] ?? ""),
    payload: (doc["payload"] as Record<string, unknown>) ?? {},
    version: PROTOCOL_VERSION,
  };
}

function controlMessage(
  kind: string,
  sessionId: string | null,
  payload: Record<string, unknown>,
): string {
  const doc: Record<string, unknown> = { kind, version: PROTOCOL_VERSION, payload };
  if (sessionId !== null) doc["session_id"] = sessionId;
  return JSON.stringify(doc);
}

export function makeQuery(query: string, snapshot: SnapshotRef, fixtureId?: string): string {
  const payload: Record<string, unknown> = { query, snapshot };
  if (fixtureId) payload["fixture_id"] = fixtureId;
  return controlMessage("query", null, payload);
}

export function makeAdvance(sessionId: string, snapshot: SnapshotRef | null): string {
  return controlMessage("advance", sessionId, snapshot ? { snapshot } : {});
}

export function makeBack(sessionId: string): string {
  return controlMessage("back", sessionId, {});
}

export function makeGetState(sessionId: string): string {
  return controlMessage("get_state", sessionId, {});
}

export function encodeBinaryFrame(frameId: string, kind: FrameKind, data: Uint8Array): ArrayBuffer {
  const encoder = new TextEncoder();
  const idBytes = encoder.encode(frameId);
  const kindBytes = encoder.encode(kind);
  const out = new Uint8Array(2 + idBytes.length + 1 + kindBytes.length + data.length);
  const view = new DataView(out.buffer);
  view.setUint16(0, idBytes.length, false);
  out.set(idBytes, 2);
  view.setUint8(2 + idBytes.length, kindBytes.length);
  out.set(kindBytes, 3 + idBytes.length);
  out.set(data, 3 + idBytes.length + kindBytes.length);
  return out.buffer;
}
