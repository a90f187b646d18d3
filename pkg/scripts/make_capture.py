#!/usr/bin/env python3
"""Synthesize replay capture files for demos and benchmarks.

Kinds:
    compose-any   blinks that type the word "any" on the keypad and commit it
                  (assumes dwell 1000 ms, threshold 80, refractory 500 ms)
    message       the four-blink canned-message path (hospital, first message)
    idle          poor-signal keepalives only; focus just rotates
    noisy         compose-any with line garbage and corrupt frames mixed in
    throughput    100,000 packets for the routing benchmark
"""

import argparse
import random
import sys

sys.path.insert(0, "src")

from blinkscribe.protocol import build_frame
from blinkscribe.replay import CaptureRecord, write_capture

BLINK = 200  # comfortably above the default threshold


def poor_signal(value: int) -> bytes:
    return build_frame(bytes([0x02, value]))


def blink_strength(value: int) -> bytes:
    return build_frame(bytes([0x02, 0x00, 0x16, value]))


def raw_sample(value: int) -> bytes:
    return build_frame(bytes([0x80, 0x02]) + value.to_bytes(2, "big", signed=True))


def compose_any() -> list[CaptureRecord]:
    # Dwell cursor positions (1000 ms steps) the blinks are timed against:
    #   1200 mode "Compose Text" -> keypad
    #   1800 key 1 (focus 0), 3500 key 3 (focus 2), 5500 key 5 (focus 4)
    #   8500 SPACE (focus 7) commits the first suggestion
    records = [CaptureRecord(100, blink_strength(40))]  # involuntary, ignored
    for t in (1200, 1800, 3500, 5500, 8500):
        records.append(CaptureRecord(t, blink_strength(BLINK)))
    return records


def four_blink_message() -> list[CaptureRecord]:
    # 200 mode "Customized Message"; two dwell steps reach "hospital";
    # 2050 enters it right after the 2000 ms tick; 2600 lands on the
    # reserved header (absorbed); 3600 selects "I need water" once the
    # 3000 ms tick focuses it.  All gaps clear the 500 ms refractory.
    times = (200, 2050, 2600, 3600)
    return [CaptureRecord(t, blink_strength(BLINK)) for t in times]


def idle(seconds: int) -> list[CaptureRecord]:
    return [CaptureRecord(t * 1000, poor_signal(0)) for t in range(seconds + 1)]


def noisy() -> list[CaptureRecord]:
    rng = random.Random(42)
    records = []
    for rec in compose_any():
        junk = bytes(b for b in rng.randbytes(rng.randint(4, 24)) if b != 0xAA)
        bad = bytearray(blink_strength(10))
        bad[-1] ^= 0xFF  # checksum failure
        records.append(CaptureRecord(rec.t_ms, junk + bytes(bad) + rec.data))
    return records


def throughput() -> list[CaptureRecord]:
    rng = random.Random(7)
    records = []
    for t_ms in range(1000):
        chunk = bytearray()
        for _ in range(100):
            chunk += raw_sample(rng.randint(-2048, 2047))
        records.append(CaptureRecord(t_ms, bytes(chunk)))
    return records


KINDS = {
    "compose-any": compose_any,
    "message": four_blink_message,
    "idle": lambda: idle(10),
    "noisy": noisy,
    "throughput": throughput,
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("kind", choices=sorted(KINDS))
    parser.add_argument("--out", required=True, help="capture file to write")
    args = parser.parse_args()
    records = KINDS[args.kind]()
    write_capture(args.out, records)
    total = sum(len(r.data) for r in records)
    print(f"wrote {args.out}: {len(records)} records, {total} bytes of stream")
    return 0


if __name__ == "__main__":
    sys.exit(main())
