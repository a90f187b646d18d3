import type { ServerFrame, Snapshot } from "./protocol.js";

// All page state lives here and changes only through reduce(). Focus is
// deliberately not a field: it exists solely inside the latest snapshot,
// which is what keeps the highlight honest (scanning logic never runs
// client-side).

export type Connection = "connecting" | "open" | "closed";

export interface LogEntry {
  kind: "text" | "speech" | "error" | "info";
  text: string;
}

export interface UiState {
  connection: Connection;
  snapshot: Snapshot | null;
  log: LogEntry[];
  threshold: number;
  dwell: number;
}

export type UiEvent =
  | { type: "socket"; connection: Connection }
  | { type: "frame"; frame: ServerFrame }
  | { type: "threshold_slider"; value: number }
  | { type: "dwell_slider"; ms: number };

export const MAX_LOG = 200;

export function initialState(): UiState {
  return { connection: "connecting", snapshot: null, log: [], threshold: 80, dwell: 1000 };
}

function append(log: LogEntry[], entry: LogEntry): LogEntry[] {
  const next = [...log, entry];
  return next.length > MAX_LOG ? next.slice(next.length - MAX_LOG) : next;
}

export function reduce(state: UiState, ev: UiEvent): UiState {
  switch (ev.type) {
    case "socket": {
      if (ev.connection === state.connection) return state;
      const note: LogEntry = { kind: "info", text: `connection ${ev.connection}` };
      return { ...state, connection: ev.connection, log: append(state.log, note) };
    }
    case "frame":
      return applyFrame(state, ev.frame);
    case "threshold_slider":
      return { ...state, threshold: ev.value };
    case "dwell_slider":
      return { ...state, dwell: ev.ms };
  }
}

function applyFrame(state: UiState, frame: ServerFrame): UiState {
  switch (frame.type) {
    case "snapshot":
      // Sliders follow the server's accepted config so a rejected command
      // snaps them back instead of lying.
      return {
        ...state,
        snapshot: frame,
        threshold: frame.config.threshold,
        dwell: frame.config.dwell_ms,
      };
    case "text_emitted":
      return { ...state, log: append(state.log, { kind: "text", text: frame.text }) };
    case "speech_request":
      return { ...state, log: append(state.log, { kind: "speech", text: frame.text }) };
    case "error":
      return { ...state, log: append(state.log, { kind: "error", text: frame.error }) };
  }
}
