"""Shared helpers: row/frame builders and an independent prediction oracle.

The oracle deliberately avoids the trie.  It works on flat code strings so
that agreement with the library is evidence, not tautology.
"""

from __future__ import annotations

from blinkscribe.protocol import MAX_PAYLOAD, SYNC

# Letter -> digit table written out by hand.
_ORACLE_KEY = {}
for _letters, _digit in (("abcde", "1"), ("fghij", "2"), ("klmno", "3"),
                         ("pqrst", "4"), ("uvwxy", "5"), ("z", "6")):
    for _ch in _letters:
        _ORACLE_KEY[_ch] = _digit


def oracle_encode(word: str) -> str:
    return "".join(_ORACLE_KEY[ch] for ch in word.lower())


def _dedupe(words):
    seen = set()
    out = []
    for w in words:
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def oracle_suggest(words, prefix: str, num_words: int) -> list[str]:
    """Unbounded-search expectation: filter by code prefix, sort by
    (code length, code, dictionary position), truncate."""
    ranked = sorted(
        (len(code), code, pos, w)
        for pos, w in enumerate(_dedupe(words))
        if (code := oracle_encode(w)).startswith(prefix)
    )
    return [w for _, _, _, w in ranked[:num_words]]


def oracle_suggest_bounded(words, prefix: str, num_words: int, max_search: int) -> list[str]:
    """Budgeted expectation: breadth-first over the set of code prefixes,
    where dequeuing a code spends one unit of max_search."""
    deduped = _dedupe(words)
    codes = {oracle_encode(w) for w in deduped}
    nodes = {c[:i] for c in codes for i in range(len(c) + 1)}
    if prefix not in nodes:
        return []
    at = {}
    for w in deduped:
        at.setdefault(oracle_encode(w), []).append(w)
    queue = [prefix]
    out: list[str] = []
    budget = max_search
    while len(out) < num_words and queue and budget > 0:
        code = queue.pop(0)
        budget -= 1
        for digit in "123456":
            if code + digit in nodes:
                queue.append(code + digit)
        out.extend(at.get(code, ()))
    return out[:num_words]


# -- raw stream builders -------------------------------------------------

def row_poor(value: int) -> bytes:
    return bytes([0x02, value])


def row_blink(value: int) -> bytes:
    return bytes([0x16, value])


def row_raw(value: int) -> bytes:
    return bytes([0x80, 2]) + value.to_bytes(2, "big", signed=True)


def row_eeg(*bands: int) -> bytes:
    assert len(bands) == 8
    return bytes([0x83, 24]) + b"".join(v.to_bytes(3, "big") for v in bands)


def frame(payload: bytes) -> bytes:
    """Frame a payload by hand (not via build_frame, so tests of the
    builder have something to agree with)."""
    assert 1 <= len(payload) <= MAX_PAYLOAD
    return SYNC + bytes([len(payload)]) + payload + bytes([~sum(payload) & 0xFF])


def blink_packet(strength: int) -> bytes:
    return frame(row_poor(0) + row_blink(strength))


# -- scripted captures -------------------------------------------------------

def compose_any_capture():
    """Capture whose blinks, with dwell 1000/threshold 80/refractory 500 and
    the five-word test dictionary, compose the word "any" plus a space.

    Timeline: tick@1000 moves mode focus to Compose Text; blinks then enter
    the keypad, press keys 1/3/5 as the dwell cursor passes them, and commit
    the first suggestion with SPACE at focus 7.
    """
    from blinkscribe.replay import CaptureRecord

    blink_times = (1200, 1800, 3500, 5500, 8500)
    records = [CaptureRecord(100, blink_packet(40))]  # below threshold, ignored
    records += [CaptureRecord(t, blink_packet(200)) for t in blink_times]
    return sorted(records, key=lambda r: r.t_ms)


# -- scanning machine model check ------------------------------------------

def assert_valid_scan_state(state, catalog, predictor):
    from blinkscribe import selector

    panel_controls = selector.controls(state, catalog)
    assert len(panel_controls) > 0
    assert 0 <= state.focus < len(panel_controls)
    assert (state.category is not None) == (state.panel is selector.Panel.MESSAGE)
    if state.category is not None:
        assert state.category in catalog.categories
    assert all(d in "123456" for d in state.composed_code)
    expected = tuple(predictor(state.composed_code)) if state.composed_code else ()
    assert state.suggestions == expected
    if state.panel is selector.Panel.SUGGESTION:
        assert state.suggestions


def explore_machine(catalog, predictor, depth):
    """Breadth-first sweep of every tick/blink sequence up to `depth`.

    Validates every reached state and checks that each TextEmitted carries
    a SpeechRequested for the same text.  Returns (states, panels) seen.
    """
    from blinkscribe import selector

    start = selector.initial_state()
    assert_valid_scan_state(start, catalog, predictor)
    seen = {start}
    frontier = [start]
    panels = {start.panel}
    for _ in range(depth):
        next_frontier = []
        for state in frontier:
            ticked = selector.tick(state, catalog)
            blinked, outputs = selector.on_blink(state, catalog, predictor)
            emitted = [o.text for o in outputs if isinstance(o, selector.TextEmitted)]
            spoken = [o.text for o in outputs if isinstance(o, selector.SpeechRequested)]
            assert emitted == spoken
            for nxt in (ticked, blinked):
                assert_valid_scan_state(nxt, catalog, predictor)
                if nxt not in seen:
                    seen.add(nxt)
                    next_frontier.append(nxt)
                    panels.add(nxt.panel)
        frontier = next_frontier
    return seen, panels
