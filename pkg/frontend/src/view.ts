import type { Snapshot } from "./protocol.js";
import { BAND_NAMES } from "./protocol.js";
import type { UiState } from "./state.js";

// Pure snapshot -> viewmodel mapping. The DOM layer just paints whatever
// comes out of here, so every rendering rule is testable without a browser.

export interface ControlView {
  label: string;
  focused: boolean;
}

export interface TelemetryView {
  blinkStrength: number;
  poorSignal: number;
  signalWarning: boolean;
  bands: { name: string; value: number }[];
  packets: number;
  checksumFailures: number;
  desyncEvents: number;
  blinks: number;
  sourceConnected: boolean;
}

export interface View {
  banner: string | null;
  panel: string;
  composedText: string;
  composedCode: string;
  // Which region the active scan list occupies: message-flow panels on
  // the left, typing-flow panels in the center next to the suggestions.
  region: "left" | "center";
  controls: ControlView[];
  suggestions: string[];
  telemetry: TelemetryView | null;
  log: { kind: string; text: string }[];
  threshold: number;
  dwell: number;
}

export const POOR_SIGNAL_MAX = 200;

const LEFT_PANELS = new Set(["ModeScan", "CategoryScan", "MessageScan"]);

export function panelRegion(panel: string): "left" | "center" {
  return LEFT_PANELS.has(panel) ? "left" : "center";
}

function telemetryView(snap: Snapshot): TelemetryView {
  return {
    blinkStrength: snap.telemetry.blink_strength,
    poorSignal: snap.telemetry.poor_signal,
    signalWarning: snap.telemetry.poor_signal >= POOR_SIGNAL_MAX,
    bands: BAND_NAMES.map((name) => ({ name, value: snap.telemetry.bands[name] })),
    packets: snap.stats.packets,
    checksumFailures: snap.stats.checksum_failures,
    desyncEvents: snap.stats.desync_events,
    blinks: snap.stats.blinks,
    sourceConnected: snap.source_connected,
  };
}

export function render(state: UiState): View {
  const snap = state.snapshot;
  const banner =
    state.connection !== "open" ? "connection lost, reconnecting..." :
    snap === null ? "waiting for session state..." :
    null;

  if (snap === null) {
    return {
      banner, panel: "", composedText: "", composedCode: "",
      region: "left", controls: [], suggestions: [], telemetry: null,
      log: state.log, threshold: state.threshold, dwell: state.dwell,
    };
  }

  // The focus highlight is derived here and nowhere else; the index comes
  // straight from the snapshot, so exactly one control ever carries it.
  const controls = snap.controls.map((label, i) => ({
    label,
    focused: i === snap.focus,
  }));

  return {
    banner,
    panel: snap.panel,
    composedText: snap.composed_text,
    composedCode: snap.composed_code,
    region: panelRegion(snap.panel),
    controls,
    suggestions: snap.suggestions,
    telemetry: telemetryView(snap),
    log: state.log,
    threshold: state.threshold,
    dwell: state.dwell,
  };
}
