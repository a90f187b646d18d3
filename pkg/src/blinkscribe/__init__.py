"""Blink-driven text entry: headset stream decoding, multitap word
prediction, and a dwell-timer scanning interface served over WebSocket."""

from .blink import BlinkConfig, BlinkDetector, BlinkEvent, OutOfOrderTimestamp, Telemetry
from .predict import (
    SearchBudget,
    Suggester,
    Suggestion,
    T6Index,
    T6Trie,
    build_index,
    build_trie,
    encode,
    load_dictionary,
    read_index,
    suggest,
    write_index,
)
from .protocol import (
    BlinkStrength,
    EegBands,
    EegPower,
    PoorSignal,
    RawSample,
    StreamPacket,
    StreamParser,
    UnknownRow,
    build_frame,
    checksum,
    parse_payload,
)
from .replay import CaptureRecord, read_capture, write_capture
from .selector import Panel, PanelCatalog, ScanState, SpeechRequested, StateChanged, TextEmitted
from .session import (
    ConfigError,
    ReplaySource,
    SerialSource,
    SessionConfig,
    SessionCore,
    SourceUnavailable,
    run_replay,
)

__version__ = "0.1.0"
