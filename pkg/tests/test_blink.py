import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blinkscribe.blink import BlinkConfig, BlinkDetector, BlinkEvent, OutOfOrderTimestamp
from blinkscribe.protocol import (
    BlinkStrength,
    EegBands,
    EegPower,
    PoorSignal,
    RawSample,
    UnknownRow,
)


def run_rows(rows, cfg):
    """rows: list of (t_ms, DataRow) -> list of BlinkEvent."""
    det = BlinkDetector()
    events = []
    for t_ms, row in rows:
        ev = det.observe(row, t_ms, cfg)
        if ev is not None:
            events.append(ev)
    return events


def test_strictly_above_threshold_fires():
    cfg = BlinkConfig(threshold=80)
    events = run_rows([(0, BlinkStrength(90))], cfg)
    assert events == [BlinkEvent(t_ms=0, strength=90)]


def test_equal_to_threshold_does_not_fire():
    cfg = BlinkConfig(threshold=80)
    assert run_rows([(0, BlinkStrength(80))], cfg) == []


def test_refractory_suppresses_second_row():
    cfg = BlinkConfig(threshold=80, refractory_ms=500)
    rows = [(100, BlinkStrength(200)), (300, BlinkStrength(210))]
    events = run_rows(rows, cfg)
    assert len(events) == 1
    assert events[0].t_ms == 100


def test_refractory_boundary_is_inclusive():
    # A gap of exactly refractory_ms is enough.
    cfg = BlinkConfig(threshold=80, refractory_ms=500)
    rows = [(100, BlinkStrength(200)), (600, BlinkStrength(210))]
    assert len(run_rows(rows, cfg)) == 2


def test_non_blink_row_updates_telemetry_only():
    det = BlinkDetector()
    cfg = BlinkConfig()
    assert det.observe(PoorSignal(0), 10, cfg) is None
    assert det.telemetry.poor_signal == 0
    assert det.telemetry.updated_at_ms == 10


def test_blink_row_updates_last_strength_even_below_threshold():
    det = BlinkDetector()
    cfg = BlinkConfig(threshold=80)
    det.observe(BlinkStrength(40), 5, cfg)
    assert det.telemetry.last_blink_strength == 40


def test_eeg_row_updates_bands():
    det = BlinkDetector()
    bands = EegBands(delta=7, theta=3)
    det.observe(EegPower(bands), 20, BlinkConfig())
    assert det.telemetry.bands == bands
    assert det.telemetry.updated_at_ms == 20


def test_unknown_row_leaves_telemetry_untouched():
    det = BlinkDetector()
    before = det.telemetry
    det.observe(UnknownRow(0x7F, b"\x01"), 30, BlinkConfig())
    assert det.telemetry == before


def test_raw_sample_bumps_timestamp_only():
    det = BlinkDetector()
    det.observe(RawSample(-5), 40, BlinkConfig())
    assert det.telemetry.updated_at_ms == 40
    assert det.telemetry.last_blink_strength == 0


def test_out_of_order_timestamp_raises():
    det = BlinkDetector()
    cfg = BlinkConfig()
    det.observe(PoorSignal(0), 100, cfg)
    with pytest.raises(OutOfOrderTimestamp):
        det.observe(PoorSignal(0), 99, cfg)


def test_equal_timestamps_are_fine():
    det = BlinkDetector()
    cfg = BlinkConfig()
    det.observe(PoorSignal(0), 100, cfg)
    det.observe(BlinkStrength(90), 100, cfg)  # no raise


row_strategy = st.one_of(
    st.builds(BlinkStrength, st.integers(0, 255)),
    st.builds(PoorSignal, st.integers(0, 200)),
    st.builds(RawSample, st.integers(-32768, 32767)),
)


@st.composite
def timed_rows(draw):
    rows = draw(st.lists(row_strategy, max_size=40))
    gaps = draw(st.lists(st.integers(0, 800), min_size=len(rows), max_size=len(rows)))
    t = 0
    out = []
    for row, gap in zip(rows, gaps):
        t += gap
        out.append((t, row))
    return out


@given(timed_rows(), st.integers(0, 255))
@settings(max_examples=200)
def test_events_never_exceed_qualifying_rows(rows, threshold):
    cfg = BlinkConfig(threshold=threshold, refractory_ms=500)
    events = run_rows(rows, cfg)
    qualifying = sum(
        1 for _, r in rows if isinstance(r, BlinkStrength) and r.value > threshold
    )
    assert len(events) <= qualifying
    assert all(e.strength > threshold for e in events)


@given(timed_rows(), st.integers(0, 255))
@settings(max_examples=200)
def test_zero_refractory_is_memoryless(rows, threshold):
    cfg = BlinkConfig(threshold=threshold, refractory_ms=0)
    events = run_rows(rows, cfg)
    expected = [
        BlinkEvent(t, r.value)
        for t, r in rows
        if isinstance(r, BlinkStrength) and r.value > threshold
    ]
    assert events == expected


@given(timed_rows(), st.integers(0, 254))
@settings(max_examples=200)
def test_raising_threshold_never_adds_events(rows, threshold):
    low = run_rows(rows, BlinkConfig(threshold=threshold, refractory_ms=500))
    high = run_rows(rows, BlinkConfig(threshold=threshold + 1, refractory_ms=500))
    assert len(high) <= len(low)


@given(timed_rows())
@settings(max_examples=150)
def test_events_respect_refractory_spacing(rows):
    cfg = BlinkConfig(threshold=10, refractory_ms=300)
    events = run_rows(rows, cfg)
    for a, b in zip(events, events[1:]):
        assert b.t_ms - a.t_ms >= 300


@given(timed_rows())
@settings(max_examples=150)
def test_telemetry_timestamp_monotonic(rows):
    det = BlinkDetector()
    cfg = BlinkConfig()
    last = 0
    for t, row in rows:
        det.observe(row, t, cfg)
        assert det.telemetry.updated_at_ms >= last
        last = det.telemetry.updated_at_ms
