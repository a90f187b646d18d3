"""Session orchestration: source -> protocol -> blink -> selector -> outputs.

All mutable state lives in a SessionCore owned by exactly one event loop.
The loop merges three kinds of input (source bytes, dwell ticks, UI
commands) and the core maps each input to broadcastable messages.

In replay mode the dwell timer runs on replay time (the capture file's
t_ms), so a capture plus a command script produces the same snapshot
sequence on every run.  Live mode drives the same core from the wall clock.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Union

from . import selector
from .blink import BlinkConfig, BlinkDetector
from .predict import Suggester, build_trie, load_dictionary
from .protocol import StreamParser, parse_payload
from .replay import CaptureRecord
from .selector import PanelCatalog, ScanState, SpeechRequested, StateChanged, TextEmitted

logger = logging.getLogger(__name__)

VALID_BAUD_RATES = (9600, 57600, 115200)
MIN_DWELL_MS = 100


class ConfigError(Exception):
    """Configuration rejected before the session starts."""


class SourceUnavailable(Exception):
    """The byte source could not be opened at startup."""


@dataclass(frozen=True)
class SerialSource:
    port: str
    baud: int = 57600


@dataclass(frozen=True)
class ReplaySource:
    path: str
    speed: float = 1.0  # wall-clock time compression for served replays


Source = Union[SerialSource, ReplaySource]


@dataclass
class SessionConfig:
    dictionary_path: str
    source: Source | None = None
    catalog_path: str | None = None
    blink_threshold: int = 80
    refractory_ms: int = 500
    dwell_ms: int = 1000
    num_words: int = 5
    listen: str = "127.0.0.1:8765"

    def validate(self) -> None:
        if self.dwell_ms < MIN_DWELL_MS:
            raise ConfigError(f"dwell_ms must be >= {MIN_DWELL_MS}, got {self.dwell_ms}")
        if not 0 <= self.blink_threshold <= 255:
            raise ConfigError(f"blink_threshold must be in 0..255, got {self.blink_threshold}")
        if self.refractory_ms < 0:
            raise ConfigError("refractory_ms must be >= 0")
        if self.num_words < 1:
            raise ConfigError("num_words must be >= 1")
        if isinstance(self.source, SerialSource) and self.source.baud not in VALID_BAUD_RATES:
            raise ConfigError(
                f"baud rate must be one of {VALID_BAUD_RATES}, got {self.source.baud}"
            )
        if isinstance(self.source, ReplaySource) and self.source.speed <= 0:
            raise ConfigError("replay speed must be > 0")


def load_runtime(config: SessionConfig) -> tuple[Suggester, PanelCatalog]:
    """Load the dictionary and catalog named by the config."""
    try:
        words, _ = load_dictionary(config.dictionary_path)
    except OSError as exc:
        raise ConfigError(f"cannot read dictionary: {exc}") from None
    if config.catalog_path is None:
        catalog = PanelCatalog.default()
    else:
        try:
            catalog = PanelCatalog.from_json(config.catalog_path)
        except OSError as exc:
            raise ConfigError(f"cannot read catalog: {exc}") from None
        except selector.CatalogError as exc:
            raise ConfigError(str(exc)) from None
    return Suggester(build_trie(words), num_words=config.num_words), catalog


class SessionCore:
    """Single-owner pipeline state; handlers return broadcastable messages.

    Each handler returns (changed, events): `changed` says the snapshot
    content moved, `events` is the list of text_emitted / speech_request
    messages produced.  Snapshot materialization is left to the caller so
    headless replays pay nothing for it.
    """

    def __init__(self, config: SessionConfig, suggester: Suggester, catalog: PanelCatalog):
        config.validate()
        self.config = config
        self.catalog = catalog
        self.parser = StreamParser()
        self.detector = BlinkDetector()
        self.scan: ScanState = selector.initial_state()
        self.blinks = 0
        self.source_connected = True
        self._predictor = suggester.words_for

    # -- input handlers -------------------------------------------------

    def handle_bytes(self, t_ms: int, data: bytes) -> tuple[bool, list[dict]]:
        stats = self.parser.stats
        before = (stats.packets, stats.checksum_failures, stats.desync_events)
        events: list[dict] = []
        cfg = BlinkConfig(self.config.blink_threshold, self.config.refractory_ms)
        for packet in self.parser.feed_bytes(data):
            rows, truncated = parse_payload(packet.payload)
            if truncated:
                logger.debug("dropped partial row: %s", truncated)
            for row in rows:
                if self.detector.observe(row, t_ms, cfg) is not None:
                    events.extend(self._apply_blink())
        changed = before != (stats.packets, stats.checksum_failures, stats.desync_events)
        return changed, events

    def handle_tick(self, t_ms: int) -> tuple[bool, list[dict]]:
        old = self.scan
        self.scan = selector.tick(self.scan, self.catalog)
        return self.scan != old, []

    def handle_command(self, payload: object) -> tuple[dict | None, bool, list[dict]]:
        """Apply one UI command; returns (direct reply, changed, events)."""
        if not isinstance(payload, dict) or not isinstance(payload.get("type"), str):
            return _error("malformed command"), False, []
        kind = payload["type"]
        if kind == "sim_blink":
            # Bypasses the detector entirely: no threshold, no refractory.
            events = self._apply_blink()
            return None, True, events
        if kind == "set_threshold":
            value = payload.get("value")
            if not isinstance(value, int) or not 0 <= value <= 255:
                return _error("threshold must be an integer in 0..255"), False, []
            changed = value != self.config.blink_threshold
            self.config.blink_threshold = value
            return None, changed, []
        if kind == "set_dwell":
            ms = payload.get("ms")
            if not isinstance(ms, int) or ms < MIN_DWELL_MS:
                return _error(f"dwell_ms must be an integer >= {MIN_DWELL_MS}"), False, []
            changed = ms != self.config.dwell_ms
            self.config.dwell_ms = ms
            return None, changed, []
        if kind == "get_snapshot":
            return self.snapshot(), False, []
        return _error(f"unknown command: {kind}"), False, []

    def mark_source_lost(self) -> bool:
        changed = self.source_connected
        self.source_connected = False
        return changed

    # -- internals -------------------------------------------------------

    def _apply_blink(self) -> list[dict]:
        self.blinks += 1
        self.scan, outputs = selector.on_blink(self.scan, self.catalog, self._predictor)
        messages = []
        for out in outputs:
            if isinstance(out, TextEmitted):
                messages.append({"type": "text_emitted", "text": out.text})
            elif isinstance(out, SpeechRequested):
                messages.append({"type": "speech_request", "text": out.text})
            elif isinstance(out, StateChanged):
                pass  # the snapshot broadcast covers it
        return messages

    def snapshot(self) -> dict:
        """Serializable copy of everything a UI client renders."""
        stats = self.parser.stats
        return {
            "type": "snapshot",
            "panel": self.scan.panel.value,
            "controls": list(selector.controls(self.scan, self.catalog)),
            "focus": self.scan.focus,
            "composed_code": self.scan.composed_code,
            "composed_text": self.scan.composed_text,
            "suggestions": list(self.scan.suggestions),
            "telemetry": self.detector.telemetry.as_dict(),
            "stats": {
                "packets": stats.packets,
                "checksum_failures": stats.checksum_failures,
                "desync_events": stats.desync_events,
                "blinks": self.blinks,
            },
            "config": {
                "threshold": self.config.blink_threshold,
                "dwell_ms": self.config.dwell_ms,
                "num_words": self.config.num_words,
            },
            "source_connected": self.source_connected,
        }


def _error(message: str) -> dict:
    return {"type": "error", "error": message}


@dataclass(frozen=True)
class ScriptedCommand:
    """A UI command injected at a fixed replay time, for deterministic runs."""

    t_ms: int
    payload: dict


@dataclass
class ReplaySummary:
    state_changes: int = 0
    events: list[dict] = field(default_factory=list)
    replies: list[dict] = field(default_factory=list)


def run_replay(
    core: SessionCore,
    records: list[CaptureRecord],
    commands: tuple[ScriptedCommand, ...] = (),
    on_change: Callable[[SessionCore], None] | None = None,
    on_event: Callable[[dict], None] | None = None,
) -> ReplaySummary:
    """Drive a core over a capture plus a command script, deterministically.

    Dwell ticks fire at multiples of dwell_ms in replay time, up to the last
    record's timestamp; at equal times the order is ticks, then bytes, then
    commands.  An accepted set_dwell reschedules the next tick to its own
    time plus the new interval.
    """
    summary = ReplaySummary()

    def dispatch(changed: bool, events: list[dict]) -> None:
        for msg in events:
            summary.events.append(msg)
            if on_event:
                on_event(msg)
        if changed:
            summary.state_changes += 1
            if on_change:
                on_change(core)

    merged: list[tuple[int, int, int, object]] = []
    merged.extend((rec.t_ms, 1, i, rec) for i, rec in enumerate(records))
    merged.extend((cmd.t_ms, 2, i, cmd) for i, cmd in enumerate(commands))
    merged.sort(key=lambda item: item[:3])

    t_end = records[-1].t_ms if records else None
    next_tick = core.config.dwell_ms

    def run_ticks(up_to: int) -> int:
        tick = next_tick
        while tick <= up_to:
            dispatch(*core.handle_tick(tick))
            tick += core.config.dwell_ms
        return tick

    for t_ms, _, _, item in merged:
        if t_end is not None:
            next_tick = run_ticks(min(t_ms, t_end))
        if isinstance(item, CaptureRecord):
            dispatch(*core.handle_bytes(item.t_ms, item.data))
        else:
            dwell_before = core.config.dwell_ms
            reply, changed, events = core.handle_command(item.payload)
            if reply is not None:
                summary.replies.append(reply)
            dispatch(changed, events)
            if core.config.dwell_ms != dwell_before:
                next_tick = item.t_ms + core.config.dwell_ms
    if t_end is not None:
        run_ticks(t_end)
    return summary
