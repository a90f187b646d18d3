"""Timestamped captures of the raw byte stream, replacing live hardware.

File format: text, one record per line, each a JSON object
``{"t_ms": <int milliseconds since capture start>, "data": "<hex bytes>"}``.
Records replay in file order; timestamps must be non-decreasing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class CaptureFormatError(ValueError):
    """Capture file line is not a valid record."""


@dataclass(frozen=True)
class CaptureRecord:
    t_ms: int
    data: bytes


def read_capture(path: str) -> list[CaptureRecord]:
    records: list[CaptureRecord] = []
    last_t = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                t_ms = doc["t_ms"]
                data = bytes.fromhex(doc["data"])
                if not isinstance(t_ms, int) or isinstance(t_ms, bool):
                    raise TypeError("t_ms must be an integer")
            except (ValueError, KeyError, TypeError) as exc:
                raise CaptureFormatError(f"{path}:{lineno}: {exc}") from None
            if last_t is not None and t_ms < last_t:
                raise CaptureFormatError(
                    f"{path}:{lineno}: t_ms went backwards ({last_t} -> {t_ms})"
                )
            last_t = t_ms
            records.append(CaptureRecord(t_ms, data))
    return records


def write_capture(path: str, records: list[CaptureRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps({"t_ms": rec.t_ms, "data": rec.data.hex()}) + "\n")
