// Thin WebSocket wrapper: socket events become view events on one ordered
// stream; outbound sends are fire-and-forget strings or binary frames.

import { parseServerMessage, ProtocolVersionError } from "./protocol.js";
import { ViewEvent } from "./viewstate.js";

export interface Connection {
  send(text: string): void;
  sendBinary(data: ArrayBuffer): void;
  close(): void;
}

export function connect(url: string, onEvent: (event: ViewEvent) => void): Connection {
  onEvent({ type: "connecting" });
  const ws = new WebSocket(url);
  ws.binaryType = "arraybuffer";
  ws.onopen = () => onEvent({ type: "connected" });
  ws.onclose = () => onEvent({ type: "disconnected" });
  ws.onerror = () => onEvent({ type: "connect_failed", detail: url });
  ws.onmessage = (raw) => {
    if (typeof raw.data !== "string") return; // server never sends binary
    try {
      onEvent({ type: "server", message: parseServerMessage(raw.data) });
    } catch (err) {
      if (err instanceof ProtocolVersionError) {
        onEvent({ type: "protocol_version_error", detail: String(err.message) });
      } else {
        onEvent({ type: "protocol_version_error", detail: `bad server reply: ${err}` });
      }
    }
  };
  return {
    send: (text) => {
      if (ws.readyState === WebSocket.OPEN) ws.send(text);
    },
    sendBinary: (data) => {
      if (ws.readyState === WebSocket.OPEN) ws.send(data);
    },
    close: () => ws.close(),
  };
}
