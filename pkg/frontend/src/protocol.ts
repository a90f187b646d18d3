// Wire types for the session WebSocket. Everything here mirrors what the
// server actually sends and accepts; parse functions return null instead of
// throwing so a garbled frame can't take the page down.

export const BAND_NAMES = [
  "delta", "theta", "low_alpha", "high_alpha",
  "low_beta", "high_beta", "low_gamma", "mid_gamma",
] as const;

export type BandName = (typeof BAND_NAMES)[number];

export interface Telemetry {
  blink_strength: number;
  poor_signal: number;
  bands: Record<BandName, number>;
  updated_at_ms: number;
}

export interface Stats {
  packets: number;
  checksum_failures: number;
  desync_events: number;
  blinks: number;
}

export interface SessionConfig {
  threshold: number;
  dwell_ms: number;
  num_words: number;
}

export interface Snapshot {
  type: "snapshot";
  panel: string;
  controls: string[];
  focus: number;
  composed_code: string;
  composed_text: string;
  suggestions: string[];
  telemetry: Telemetry;
  stats: Stats;
  config: SessionConfig;
  source_connected: boolean;
}

export interface TextEmitted {
  type: "text_emitted";
  text: string;
}

export interface SpeechRequested {
  type: "speech_request";
  text: string;
}

export interface ServerError {
  type: "error";
  error: string;
}

export type ServerFrame = Snapshot | TextEmitted | SpeechRequested | ServerError;

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function isInt(v: unknown): v is number {
  return typeof v === "number" && Number.isInteger(v);
}

function isStringArray(v: unknown): v is string[] {
  return Array.isArray(v) && v.every((x) => typeof x === "string");
}

function isTelemetry(v: unknown): v is Telemetry {
  if (!isRecord(v)) return false;
  if (!isInt(v.blink_strength) || !isInt(v.poor_signal) || !isInt(v.updated_at_ms)) return false;
  if (!isRecord(v.bands)) return false;
  return BAND_NAMES.every((b) => isInt((v.bands as Record<string, unknown>)[b]));
}

function isStats(v: unknown): v is Stats {
  return isRecord(v)
    && isInt(v.packets) && isInt(v.checksum_failures)
    && isInt(v.desync_events) && isInt(v.blinks);
}

function isConfig(v: unknown): v is SessionConfig {
  return isRecord(v) && isInt(v.threshold) && isInt(v.dwell_ms) && isInt(v.num_words);
}

export function isSnapshot(v: unknown): v is Snapshot {
  if (!isRecord(v) || v.type !== "snapshot") return false;
  return typeof v.panel === "string"
    && isStringArray(v.controls)
    && isInt(v.focus)
    && typeof v.composed_code === "string"
    && typeof v.composed_text === "string"
    && isStringArray(v.suggestions)
    && isTelemetry(v.telemetry)
    && isStats(v.stats)
    && isConfig(v.config)
    && typeof v.source_connected === "boolean";
}

export function parseServerFrame(raw: string): ServerFrame | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (!isRecord(data)) return null;
  if (data.type === "snapshot") return isSnapshot(data) ? data : null;
  if (data.type === "text_emitted" || data.type === "speech_request") {
    return typeof data.text === "string" ? { type: data.type, text: data.text } : null;
  }
  if (data.type === "error") {
    return typeof data.error === "string" ? { type: "error", error: data.error } : null;
  }
  return null;
}

// Client -> server. Builders are the only way app code constructs commands,
// so validating their output covers every frame the UI can emit.

export type Command =
  | { type: "sim_blink" }
  | { type: "set_threshold"; value: number }
  | { type: "set_dwell"; ms: number }
  | { type: "get_snapshot" };

export function simBlink(): Command {
  return { type: "sim_blink" };
}

export function setThreshold(value: number): Command {
  return { type: "set_threshold", value };
}

export function setDwell(ms: number): Command {
  return { type: "set_dwell", ms };
}

export function getSnapshot(): Command {
  return { type: "get_snapshot" };
}

export function encodeCommand(cmd: Command): string {
  return JSON.stringify(cmd);
}

// The session's command schema, as the server enforces it. Kept separate
// from the Command type on purpose: this checks plain decoded JSON, which
// is what the conformance tests feed it.
export function isValidCommand(v: unknown): boolean {
  if (!isRecord(v)) return false;
  switch (v.type) {
    case "sim_blink":
    case "get_snapshot":
      return Object.keys(v).length === 1;
    case "set_threshold":
      return Object.keys(v).length === 2 && isInt(v.value) && v.value >= 0 && v.value <= 255;
    case "set_dwell":
      return Object.keys(v).length === 2 && isInt(v.ms) && v.ms >= 100;
    default:
      return false;
  }
}
