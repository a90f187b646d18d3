import { setDwell, setThreshold, simBlink } from "./protocol.js";
import { initialState, reduce } from "./state.js";
import type { UiEvent, UiState } from "./state.js";
import { makeSpeaker } from "./speech.js";
import { render } from "./view.js";
import type { View } from "./view.js";
import { SessionSocket } from "./ws.js";

// DOM glue. All behavior lives in the pure modules; this file only routes
// events into reduce() and repaints from render().

const $ = (id: string) => document.getElementById(id)!;

let state: UiState = initialState();
const speaker = makeSpeaker();

const socket = new SessionSocket(wsUrl(), {
  onFrame: (frame) => {
    if (frame.type === "speech_request") speaker.speak(frame.text);
    dispatch({ type: "frame", frame });
  },
  onStatus: (connection) => dispatch({ type: "socket", connection }),
});

function wsUrl(): string {
  const q = new URLSearchParams(location.search).get("session");
  const host = q ?? location.host;
  return `ws://${host}/ws`;
}

function dispatch(ev: UiEvent): void {
  state = reduce(state, ev);
  paint(render(state));
}

function controlList(el: HTMLElement, items: { label: string; focused: boolean }[]): void {
  el.replaceChildren(...items.map((item) => {
    const li = document.createElement("li");
    li.textContent = item.label;
    li.classList.toggle("focused", item.focused);
    return li;
  }));
}

function paint(view: View): void {
  const banner = $("banner");
  banner.textContent = view.banner ?? "";
  banner.hidden = view.banner === null;

  $("composed-text").textContent = view.composedText;
  $("composed-code").textContent = view.composedCode ? `code ${view.composedCode}` : "";
  $("panel-name").textContent = view.panel;

  const left = $("left-list") as HTMLElement;
  const center = $("center-list") as HTMLElement;
  controlList(left, view.region === "left" ? view.controls : []);
  controlList(center, view.region === "center" ? view.controls : []);

  controlList($("suggestions"), view.suggestions.map((label) => ({ label, focused: false })));

  const t = view.telemetry;
  $("telemetry").replaceChildren(...(t === null ? [] : [
    line(`blink strength ${t.blinkStrength}`),
    line(`poor signal ${t.poorSignal}`, t.signalWarning ? "warning" : ""),
    ...(t.signalWarning ? [line("check electrode contact", "warning")] : []),
    ...(t.sourceConnected ? [] : [line("signal source lost", "warning")]),
    ...t.bands.map((b) => line(`${b.name} ${b.value}`)),
    line(`packets ${t.packets}`),
    line(`checksum failures ${t.checksumFailures}`),
    line(`desync events ${t.desyncEvents}`),
    line(`blinks ${t.blinks}`),
  ]));

  $("log").replaceChildren(...view.log.slice(-12).map((e) => line(`[${e.kind}] ${e.text}`, e.kind)));

  ($("threshold") as HTMLInputElement).value = String(view.threshold);
  $("threshold-value").textContent = String(view.threshold);
  ($("dwell") as HTMLInputElement).value = String(view.dwell);
  $("dwell-value").textContent = `${view.dwell} ms`;
}

function line(text: string, cls = ""): HTMLElement {
  const div = document.createElement("div");
  div.textContent = text;
  if (cls) div.className = cls;
  return div;
}

document.addEventListener("keydown", (ev) => {
  if (ev.code === "Space" && !(ev.target instanceof HTMLInputElement)) {
    ev.preventDefault();
    socket.send(simBlink());
  }
});

$("blink-button").addEventListener("click", () => socket.send(simBlink()));

$("threshold").addEventListener("change", (ev) => {
  const value = Number((ev.target as HTMLInputElement).value);
  dispatch({ type: "threshold_slider", value });
  socket.send(setThreshold(value));
});

$("dwell").addEventListener("change", (ev) => {
  const ms = Number((ev.target as HTMLInputElement).value);
  dispatch({ type: "dwell_slider", ms });
  socket.send(setDwell(ms));
});

paint(render(state));
socket.connect();
