"""Command line entry point.

Subcommands:
    run          start a session (serial port or capture replay) and serve /ws
    build-index  precompile digit-code suggestions to a file
    suggest      one-shot prediction query, one word per line
    inspect      decode a capture, printing rows and detected blinks

Exit codes: 0 clean, 2 configuration/usage error, 3 source unavailable.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .blink import BlinkConfig, BlinkDetector
from .predict import (
    MAX_SEARCH_DEFAULT,
    NUM_WORDS_DEFAULT,
    SearchBudget,
    build_index,
    build_trie,
    load_dictionary,
    suggest,
    write_index,
)
from .protocol import (
    BlinkStrength,
    EegPower,
    PoorSignal,
    RawSample,
    StreamParser,
    UnknownRow,
    parse_payload,
)
from .replay import CaptureFormatError, read_capture
from .session import (
    ConfigError,
    ReplaySource,
    SerialSource,
    SessionConfig,
    SessionCore,
    SourceUnavailable,
    load_runtime,
)

logger = logging.getLogger(__name__)


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blinkscribe")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="start a live session and serve the UI socket")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--port", help="serial port of the headset, e.g. /dev/ttyUSB0")
    src.add_argument("--replay", help="capture file to replay instead of hardware")
    run.add_argument("--baud", type=int, default=57600, help="serial baud rate")
    run.add_argument("--speed", type=float, default=1.0, help="replay speed multiplier")
    run.add_argument("--threshold", type=int, default=80, help="blink strength threshold")
    run.add_argument("--dwell-ms", type=int, default=1000, help="scan dwell per control")
    run.add_argument("--dict", dest="dict_path", required=True, help="word list file")
    run.add_argument("--catalog", help="JSON file of message categories")
    run.add_argument("--num-words", type=int, default=NUM_WORDS_DEFAULT,
                     help="suggestions per prefix")
    run.add_argument("--listen", default="127.0.0.1:8765", help="host:port for the UI socket")
    run.set_defaults(func=cmd_run)

    build = sub.add_parser("build-index", help="precompile suggestions for short codes")
    build.add_argument("--dict", dest="dict_path", required=True)
    build.add_argument("--max-len", type=int, required=True, help="longest code to precompile")
    build.add_argument("--out", required=True, help="output index file")
    build.set_defaults(func=cmd_build_index)

    sug = sub.add_parser("suggest", help="print predictions for a digit prefix")
    sug.add_argument("--dict", dest="dict_path", required=True)
    sug.add_argument("--prefix", required=True, help="digit code, characters 1-6")
    sug.add_argument("--k", type=int, default=NUM_WORDS_DEFAULT, help="number of words")
    sug.set_defaults(func=cmd_suggest)

    ins = sub.add_parser("inspect", help="decode a capture file to text")
    ins.add_argument("--replay", required=True, help="capture file to decode")
    ins.set_defaults(func=cmd_inspect)

    return parser


def _load_words(path: str) -> list[str]:
    try:
        words, rejected = load_dictionary(path)
    except OSError as exc:
        raise ConfigError(f"cannot read dictionary {path}: {exc}") from None
    if not words:
        raise ConfigError(f"dictionary {path} contains no usable words")
    if rejected:
        logger.info("skipped %d dictionary entries", rejected)
    return words


def _read_capture(path: str):
    try:
        return read_capture(path)
    except OSError as exc:
        raise ConfigError(f"cannot read capture {path}: {exc}") from None


def cmd_run(args: argparse.Namespace) -> int:
    if args.replay is not None:
        source = ReplaySource(path=args.replay, speed=args.speed)
    else:
        source = SerialSource(port=args.port, baud=args.baud)
    listen = os.environ.get("BLINKSCRIBE_LISTEN") or args.listen
    config = SessionConfig(
        dictionary_path=args.dict_path,
        source=source,
        catalog_path=args.catalog,
        blink_threshold=args.threshold,
        refractory_ms=500,
        dwell_ms=args.dwell_ms,
        num_words=args.num_words,
        listen=listen,
    )
    config.validate()
    suggester, catalog = load_runtime(config)
    core = SessionCore(config, suggester, catalog)

    records = None
    if isinstance(source, ReplaySource):
        records = _read_capture(source.path)

    from .server import parse_listen, serve_session

    try:
        parse_listen(listen)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    logger.info("serving ws://%s/ws", listen)
    serve_session(config, core, records)

    stats = core.parser.stats
    print(f"finished: packets={stats.packets} checksum_failures={stats.checksum_failures} "
          f"desync_events={stats.desync_events} blinks={core.blinks}")
    return 0


def cmd_build_index(args: argparse.Namespace) -> int:
    if args.max_len < 1:
        raise ConfigError("--max-len must be at least 1")
    words = _load_words(args.dict_path)
    index = build_index(words, args.max_len)
    write_index(index, args.out)
    print(f"wrote {args.out}: records={len(index.records)} max_len={index.max_len}")
    return 0


def cmd_suggest(args: argparse.Namespace) -> int:
    if not args.prefix or any(ch not in "123456" for ch in args.prefix):
        raise ConfigError(f"prefix must be digits 1-6, got {args.prefix!r}")
    if args.k < 1:
        raise ConfigError("--k must be at least 1")
    trie = build_trie(_load_words(args.dict_path))
    for item in suggest(trie, args.prefix, SearchBudget(args.k, MAX_SEARCH_DEFAULT)):
        print(item.word)
    return 0


def format_row(row) -> str:
    if isinstance(row, PoorSignal):
        return f"PoorSignal value={row.value}"
    if isinstance(row, BlinkStrength):
        return f"BlinkStrength value={row.value}"
    if isinstance(row, RawSample):
        return f"RawSample value={row.value}"
    if isinstance(row, EegPower):
        bands = " ".join(f"{k}={v}" for k, v in row.bands.as_dict().items())
        return f"EegPower {bands}"
    assert isinstance(row, UnknownRow)
    return f"Unknown code=0x{row.code:02x} data={row.raw.hex()}"


def cmd_inspect(args: argparse.Namespace) -> int:
    records = _read_capture(args.replay)
    parser = StreamParser()
    detector = BlinkDetector()
    cfg = BlinkConfig()
    blinks = 0
    for rec in records:
        for packet in parser.feed_bytes(rec.data):
            rows, truncated = parse_payload(packet.payload)
            for row in rows:
                print(f"t={rec.t_ms} {format_row(row)}")
                event = detector.observe(row, rec.t_ms, cfg)
                if event is not None:
                    blinks += 1
                    print(f"t={rec.t_ms} BLINK strength={event.strength}")
            if truncated is not None:
                print(f"t={rec.t_ms} truncated row at payload byte {truncated.offset}")
    stats = parser.stats
    print(f"packets={stats.packets} checksum_failures={stats.checksum_failures} "
          f"desync_events={stats.desync_events} blinks={blinks}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CaptureFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SourceUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except KeyboardInterrupt:
        return 0


if __name__ == "__main__":
    sys.exit(main())
