"""Framing and row decoding for the headset's binary stream.

Wire format, one frame::

    0xAA 0xAA <plen> <payload ...> <checksum>

``plen`` is a single byte in 1..=169; the checksum is the bitwise NOT of the
8-bit sum of the payload bytes.  Anything that does not frame cleanly is
skipped by resynchronizing on the 0xAA 0xAA sync pair; a real serial link is
noisy, so framing errors are counted, never raised.

Payload row grammar: codes below 0x80 carry exactly one value byte; codes
0x80 and above are followed by a one-byte value length and that many value
bytes.  Recognized codes:

    0x02  poor signal (0..200, 0 = best contact)
    0x16  blink strength (0..255)
    0x80  raw sample, 2 bytes big-endian signed
    0x83  band powers, 24 bytes: eight big-endian unsigned 3-byte values

Every other code is preserved as an unknown row with its raw value bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Union

SYNC = b"\xaa\xaa"
MAX_PAYLOAD = 169

CODE_POOR_SIGNAL = 0x02
CODE_BLINK_STRENGTH = 0x16
CODE_RAW_SAMPLE = 0x80
CODE_EEG_POWER = 0x83


class TruncatedRow(Exception):
    """Payload ended in the middle of a row."""

    def __init__(self, offset: int, code: int):
        super().__init__(f"payload truncated at offset {offset} (row code 0x{code:02X})")
        self.offset = offset
        self.code = code


def checksum(payload: bytes) -> int:
    """Inverted 8-bit sum of the payload bytes."""
    return ~sum(payload) & 0xFF


def build_frame(payload: bytes) -> bytes:
    """Serialize a payload into a complete frame (sync + length + payload + checksum)."""
    if not 1 <= len(payload) <= MAX_PAYLOAD:
        raise ValueError(f"payload length must be 1..={MAX_PAYLOAD}, got {len(payload)}")
    return SYNC + bytes([len(payload)]) + payload + bytes([checksum(payload)])


@dataclass(frozen=True)
class StreamPacket:
    """One checksum-valid unit of the stream."""

    payload: bytes
    checksum: int


@dataclass(frozen=True)
class EegBands:
    """Relative band powers, each an unsigned 24-bit value."""

    delta: int = 0
    theta: int = 0
    low_alpha: int = 0
    high_alpha: int = 0
    low_beta: int = 0
    high_beta: int = 0
    low_gamma: int = 0
    mid_gamma: int = 0

    FIELD_ORDER: ClassVar[tuple[str, ...]] = (
        "delta", "theta", "low_alpha", "high_alpha",
        "low_beta", "high_beta", "low_gamma", "mid_gamma",
    )

    def as_dict(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in self.FIELD_ORDER}


@dataclass(frozen=True)
class PoorSignal:
    CODE: ClassVar[int] = CODE_POOR_SIGNAL
    value: int  # 0..200, values above 200 are clamped on decode


@dataclass(frozen=True)
class BlinkStrength:
    CODE: ClassVar[int] = CODE_BLINK_STRENGTH
    value: int  # 0..255


@dataclass(frozen=True)
class RawSample:
    CODE: ClassVar[int] = CODE_RAW_SAMPLE
    value: int  # signed 16-bit


@dataclass(frozen=True)
class EegPower:
    CODE: ClassVar[int] = CODE_EEG_POWER
    bands: EegBands


@dataclass(frozen=True)
class UnknownRow:
    """Unrecognized row, value bytes preserved losslessly."""

    code: int
    raw: bytes


DataRow = Union[PoorSignal, BlinkStrength, RawSample, EegPower, UnknownRow]


def parse_payload(payload: bytes) -> tuple[list[DataRow], TruncatedRow | None]:
    """Decode the rows of a checksum-valid payload, in order.

    Returns the decoded rows plus a TruncatedRow instance when the payload
    ends mid-row; rows decoded before the cut are still returned.  Never
    raises, never reads past the payload.
    """
    rows: list[DataRow] = []
    pos = 0
    n = len(payload)
    while pos < n:
        start = pos
        code = payload[pos]
        pos += 1
        if code < 0x80:
            if pos + 1 > n:
                return rows, TruncatedRow(start, code)
            value = payload[pos : pos + 1]
            pos += 1
        else:
            if pos + 1 > n:
                return rows, TruncatedRow(start, code)
            vlen = payload[pos]
            pos += 1
            if pos + vlen > n:
                return rows, TruncatedRow(start, code)
            value = payload[pos : pos + vlen]
            pos += vlen
        rows.append(_decode_row(code, value))
    return rows, None


def _decode_row(code: int, value: bytes) -> DataRow:
    if code == CODE_POOR_SIGNAL:
        return PoorSignal(min(value[0], 200))
    if code == CODE_BLINK_STRENGTH:
        return BlinkStrength(value[0])
    if code == CODE_RAW_SAMPLE and len(value) == 2:
        return RawSample(int.from_bytes(value, "big", signed=True))
    if code == CODE_EEG_POWER and len(value) == 24:
        bands = EegBands(*(int.from_bytes(value[i : i + 3], "big") for i in range(0, 24, 3)))
        return EegPower(bands)
    # Known codes with an unexpected value length fall through here too, so
    # a malformed device row degrades to Unknown instead of a bad decode.
    return UnknownRow(code, bytes(value))


@dataclass
class ParserStats:
    packets: int = 0
    checksum_failures: int = 0
    desync_events: int = 0


class StreamParser:
    """Incremental frame scanner over an arbitrarily chunked byte stream.

    Single-owner: one reader feeds it.  Output packets are plain values.
    The packets recovered from a stream do not depend on how the stream is
    split into chunks.
    """

    def __init__(self):
        self._buf = bytearray()
        self._in_desync = False
        self.stats = ParserStats()

    def feed_bytes(self, chunk: bytes) -> list[StreamPacket]:
        """Consume a chunk, returning every packet whose final byte lies in it."""
        buf = self._buf
        buf.extend(chunk)
        out: list[StreamPacket] = []
        pos = 0
        total = len(buf)
        while True:
            i = buf.find(SYNC, pos)
            if i < 0:
                # No sync pair; everything is garbage except a possible
                # trailing 0xAA that may pair with the next chunk's first byte.
                keep = total - 1 if total > pos and buf[total - 1] == 0xAA else total
                self._note_discard(keep - pos)
                pos = keep
                break
            self._note_discard(i - pos)
            self._in_desync = False
            if i + 3 > total:
                pos = i  # sync seen, length byte not yet arrived
                break
            plen = buf[i + 2]
            if not 1 <= plen <= MAX_PAYLOAD:
                self.stats.desync_events += 1
                self._in_desync = True
                pos = i + 1
                continue
            end = i + 3 + plen + 1
            if end > total:
                pos = i  # wait for the rest of the frame
                break
            payload = bytes(buf[i + 3 : i + 3 + plen])
            received = buf[end - 1]
            if checksum(payload) == received:
                self.stats.packets += 1
                out.append(StreamPacket(payload, received))
                pos = end
            else:
                self.stats.checksum_failures += 1
                pos = i + 1  # rescan; a real frame may start inside this one
        if pos:
            del buf[:pos]
        return out

    def _note_discard(self, nbytes: int) -> None:
        # A maximal run of garbage counts as one desync event, even when the
        # run arrives split across chunks.
        if nbytes > 0 and not self._in_desync:
            self.stats.desync_events += 1
            self._in_desync = True

    @property
    def pending(self) -> int:
        """Bytes buffered awaiting the rest of a frame."""
        return len(self._buf)
