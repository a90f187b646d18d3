"""Voluntary-blink detection and rolling telemetry.

A blink is voluntary when its reported strength strictly exceeds the
configured threshold.  One physical blink can produce several strength rows,
so accepted events are spaced by a refractory interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .protocol import BlinkStrength, DataRow, EegBands, EegPower, PoorSignal, RawSample


class OutOfOrderTimestamp(Exception):
    """Timestamps went backwards: broken clock or corrupt replay file."""


@dataclass(frozen=True)
class BlinkEvent:
    t_ms: int
    strength: int


@dataclass(frozen=True)
class BlinkConfig:
    threshold: int = 80        # strength must be strictly greater
    refractory_ms: int = 500   # minimum spacing between accepted events


@dataclass(frozen=True)
class Telemetry:
    """Latest signal readings; immutable snapshot safe to publish."""

    last_blink_strength: int = 0
    poor_signal: int = 200     # worst contact until the headset says otherwise
    bands: EegBands = field(default_factory=EegBands)
    updated_at_ms: int = 0

    def as_dict(self) -> dict:
        return {
            "blink_strength": self.last_blink_strength,
            "poor_signal": self.poor_signal,
            "bands": self.bands.as_dict(),
            "updated_at_ms": self.updated_at_ms,
        }


class BlinkDetector:
    """Single-owner detector state, driven by the session loop."""

    def __init__(self):
        self.telemetry = Telemetry()
        self._last_t: int | None = None
        self._last_event_t: int | None = None

    def observe(self, row: DataRow, t_ms: int, cfg: BlinkConfig) -> BlinkEvent | None:
        """Feed one decoded row; returns a BlinkEvent when one fires.

        Telemetry is updated for every recognized row.  Raises
        OutOfOrderTimestamp when t_ms decreases across calls.
        """
        if self._last_t is not None and t_ms < self._last_t:
            raise OutOfOrderTimestamp(f"t_ms went from {self._last_t} to {t_ms}")
        self._last_t = t_ms

        if isinstance(row, BlinkStrength):
            self.telemetry = replace(
                self.telemetry, last_blink_strength=row.value, updated_at_ms=t_ms
            )
            if row.value > cfg.threshold and self._refractory_clear(t_ms, cfg):
                self._last_event_t = t_ms
                return BlinkEvent(t_ms, row.value)
        elif isinstance(row, PoorSignal):
            self.telemetry = replace(self.telemetry, poor_signal=row.value, updated_at_ms=t_ms)
        elif isinstance(row, EegPower):
            self.telemetry = replace(self.telemetry, bands=row.bands, updated_at_ms=t_ms)
        elif isinstance(row, RawSample):
            self.telemetry = replace(self.telemetry, updated_at_ms=t_ms)
        # Unknown rows leave telemetry untouched.
        return None

    def _refractory_clear(self, t_ms: int, cfg: BlinkConfig) -> bool:
        return self._last_event_t is None or t_ms - self._last_event_t >= cfg.refractory_ms
