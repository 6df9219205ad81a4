// View-state reducer: server messages and navigation intents in, new state
// out. The UI is a pure renderer of this state; received guidance documents
// are stored as-is and never modified.

import { ServerMessage, makeAdvance, makeBack, SnapshotRef } from "./protocol.js";
import { StepExport } from "./overlays.js";
import { applyTick, TimerDisplay } from "./timer.js";

export type ConnectionStatus = "idle" | "connecting" | "open" | "closed" | "failed";

export interface PlanSummary {
  stepCount: number;
  instructions: string[];
  visualTypes: number[];
  deviceHint: string | null;
}

export interface ViewState {
  connection: ConnectionStatus;
  sessionId: string | null;
  plan: PlanSummary | null;
  currentStep: number;
  exports: Record<number, StepExport>;
  timer: TimerDisplay | null;
  toast: string | null;
  banner: string | null;
  awaitingReply: boolean;
}

export function initialViewState(): ViewState {
  return {
    connection: "idle",
    sessionId: null,
    plan: null,
    currentStep: 0,
    exports: {},
    timer: null,
    toast: null,
    banner: null,
    awaitingReply: false,
  };
}

export type ViewEvent =
  | { type: "connecting" }
  | { type: "connected" }
  | { type: "disconnected" }
  | { type: "connect_failed"; detail: string }
  | { type: "protocol_version_error"; detail: string }
  | { type: "server"; message: ServerMessage };

export function reduce(state: ViewState, event: ViewEvent): ViewState {
  switch (event.type) {
    case "connecting":
      return { ...state, connection: "connecting", banner: null };
    case "connected":
      return { ...state, connection: "open" };
    case "disconnected":
      return { ...state, connection: "closed" };
    case "connect_failed":
      return { ...state, connection: "failed", banner: `connection failed: ${event.detail}` };
    case "protocol_version_error":
      return { ...state, banner: event.detail };
    case "server":
      return applyServer(state, event.message);
  }
}

function applyServer(state: ViewState, message: ServerMessage): ViewState {
  switch (message.kind) {
    case "plan_ready": {
      const p = message.payload as Record<string, any>;
      return {
        ...state,
        sessionId: message.session_id,
        currentStep: Number(p["current_step"] ?? 0),
        plan: {
          stepCount: Number(p["step_count"] ?? 0),
          instructions: (p["instructions"] as string[]) ?? [],
          visualTypes: (p["visual_types"] as number[]) ?? [],
          deviceHint: (p["device_hint"] as string | null) ?? null,
        },
      };
    }
    case "guidance_ready": {
      const p = message.payload as Record<string, any>;
      const doc = p["export"] as StepExport;
      const index = Number(p["step_index"]);
      return {
        ...state,
        sessionId: message.session_id,
        currentStep: index,
        exports: { ...state.exports, [index]: doc },
        timer: null,
        toast: null,
        awaitingReply: false,
      };
    }
    case "timer_tick": {
      const p = message.payload as any;
      if (p["step_index"] !== state.currentStep) return state; // stale tick
      return { ...state, timer: applyTick(state.timer, p) };
    }
    case "error": {
      const p = message.payload as Record<string, any>;
      const code = String(p["code"] ?? "Error");
      const detail = String(p["detail"] ?? "");
      if (code === "EndOfPlan") {
        return { ...state, toast: "End of plan", awaitingReply: false };
      }
      if (code === "AtFirstStep") {
        return { ...state, toast: "Already at the first step", awaitingReply: false };
      }
      if (code === "ProtocolError") {
        return { ...state, banner: `protocol error: ${detail}`, awaitingReply: false };
      }
      return { ...state, toast: `${code}: ${detail}`, awaitingReply: false };
    }
  }
}

export interface NavigationIntent {
  send: string | null;
  state: ViewState;
}

export function canGoBack(state: ViewState): boolean {
  return state.sessionId !== null && state.currentStep > 0 && !state.awaitingReply;
}

export function canAdvance(state: ViewState): boolean {
  return state.sessionId !== null && !state.awaitingReply;
}

/** Navigation: back is disabled at the first step; advancing past the last
 * step is allowed and the server answers EndOfPlan (shown as a toast). */
export function navigate(
  state: ViewState,
  direction: "advance" | "back",
  snapshot: SnapshotRef | null,
): NavigationIntent {
  if (state.sessionId === null) return { send: null, state };
  if (direction === "back") {
    if (!canGoBack(state)) return { send: null, state };
    return { send: makeBack(state.sessionId), state: { ...state, awaitingReply: true } };
  }
  if (!canAdvance(state)) return { send: null, state };
  // with no snapshot chosen the server re-serves the cached step (after a
  // back) or answers SnapshotRequired, surfaced as a toast
  return {
    send: makeAdvance(state.sessionId, snapshot),
    state: { ...state, awaitingReply: true },
  };
}

export function currentExport(state: ViewState): StepExport | null {
  return state.exports[state.currentStep] ?? null;
}
