"""Dwell-timer scanning state machine over message panels and the keypad.

Focus rotates over the current panel's controls on every dwell tick; a blink
selects whatever holds the focus.  The machine itself is time-free and pure:
tick() and on_blink() map a state to a new state, so the session owns the
clock and the whole thing replays deterministically.

Blink narrative for a canned message: the first blink picks the mode, the
second picks a category, the third lands on the reserved header that leads
each message list (absorbed without effect), and the fourth speaks the
focused message.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Mapping, Union


class Panel(str, Enum):
    MODE = "ModeScan"
    CATEGORY = "CategoryScan"
    MESSAGE = "MessageScan"
    KEYPAD = "KeypadScan"
    SUGGESTION = "SuggestionScan"


MODES = ("Customized Message", "Compose Text")
KEYPAD = ("ABCDE", "FGHIJ", "KLMNO", "PQRST", "UVWXY", "Z",
          "SUGGEST", "SPACE", "DELETE", "SPEAK")
_KEY_SUGGEST, _KEY_SPACE, _KEY_DELETE, _KEY_SPEAK = 6, 7, 8, 9

DEFAULT_CATALOG_DATA = {
    "home": [
        "I am hungry",
        "Please turn on the TV",
        "I want to rest",
        "Thank you",
    ],
    "office": [
        "I will be late",
        "Please schedule a meeting",
        "Send me the document",
        "Call me back",
    ],
    "hospital": [
        "I need water",
        "Call the nurse",
        "I am in pain",
        "Please adjust my bed",
    ],
    "frequently used": [
        "Yes",
        "No",
        "Hello",
        "Goodbye",
    ],
}


class CatalogError(ValueError):
    """Catalog file malformed or violates its invariants."""


@dataclass(frozen=True)
class PanelCatalog:
    """Panel contents: ordered categories, their messages, fixed mode/keypad lists."""

    categories: tuple[str, ...]
    messages: Mapping[str, tuple[str, ...]]

    def __post_init__(self):
        if not self.categories:
            raise CatalogError("catalog has no categories")
        for cat in self.categories:
            if not self.messages.get(cat):
                raise CatalogError(f"category {cat!r} has no messages")

    @classmethod
    def from_mapping(cls, data: Mapping[str, list[str]]) -> "PanelCatalog":
        return cls(tuple(data), {cat: tuple(msgs) for cat, msgs in data.items()})

    @classmethod
    def default(cls) -> "PanelCatalog":
        return cls.from_mapping(DEFAULT_CATALOG_DATA)

    @classmethod
    def from_json(cls, path: str) -> "PanelCatalog":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        cats = doc.get("categories") if isinstance(doc, dict) else None
        if not isinstance(cats, dict):
            raise CatalogError(f'{path}: expected an object with a "categories" object')
        for cat, msgs in cats.items():
            if not isinstance(msgs, list) or not all(isinstance(m, str) for m in msgs):
                raise CatalogError(f"{path}: messages for {cat!r} must be a list of strings")
        return cls.from_mapping(cats)

    def message_controls(self, category: str) -> tuple[str, ...]:
        # Index 0 is the reserved header; real messages start at index 1.
        return (f"[{category}]",) + self.messages[category]


@dataclass(frozen=True)
class ScanState:
    panel: Panel = Panel.MODE
    category: str | None = None  # set while panel is MESSAGE
    focus: int = 0
    composed_code: str = ""
    composed_text: str = ""
    suggestions: tuple[str, ...] = ()


def initial_state() -> ScanState:
    return ScanState()


@dataclass(frozen=True)
class TextEmitted:
    text: str


@dataclass(frozen=True)
class SpeechRequested:
    text: str


@dataclass(frozen=True)
class StateChanged:
    pass


SelectorOutput = Union[TextEmitted, SpeechRequested, StateChanged]

# composed_code -> suggestion words, in rank order
Predictor = Callable[[str], list[str]]


def controls(state: ScanState, catalog: PanelCatalog) -> tuple[str, ...]:
    """Labels of the current panel, in focus-rotation order."""
    if state.panel is Panel.MODE:
        return MODES
    if state.panel is Panel.CATEGORY:
        return catalog.categories
    if state.panel is Panel.MESSAGE:
        return catalog.message_controls(state.category)
    if state.panel is Panel.KEYPAD:
        return KEYPAD
    return state.suggestions


def tick(state: ScanState, catalog: PanelCatalog) -> ScanState:
    """Advance focus to the next control of the current panel, wrapping."""
    return replace(state, focus=(state.focus + 1) % len(controls(state, catalog)))


def on_blink(state: ScanState, catalog: PanelCatalog,
             predictor: Predictor) -> tuple[ScanState, list[SelectorOutput]]:
    """Select the focused control.  Every (panel, focus) pair has a defined result.

    Returns the next state plus outputs: a TextEmitted/SpeechRequested pair
    when text is spoken, StateChanged for any other effective transition,
    and nothing for the few defined no-ops.
    """
    if state.panel is Panel.MODE:
        if state.focus == 0:
            return replace(state, panel=Panel.CATEGORY, focus=0), [StateChanged()]
        return replace(state, panel=Panel.KEYPAD, focus=0), [StateChanged()]

    if state.panel is Panel.CATEGORY:
        chosen = catalog.categories[state.focus]
        return replace(state, panel=Panel.MESSAGE, category=chosen, focus=0), [StateChanged()]

    if state.panel is Panel.MESSAGE:
        if state.focus == 0:
            return state, []  # reserved header, blink absorbed
        message = catalog.messages[state.category][state.focus - 1]
        next_state = replace(state, panel=Panel.MODE, category=None, focus=0)
        return next_state, [TextEmitted(message), SpeechRequested(message)]

    if state.panel is Panel.KEYPAD:
        return _keypad_select(state, predictor)

    # SUGGESTION: commit the focused word and go back to composing.
    word = state.suggestions[state.focus]
    next_state = replace(
        state,
        panel=Panel.KEYPAD,
        focus=0,
        composed_code="",
        composed_text=state.composed_text + word + " ",
        suggestions=(),
    )
    return next_state, [StateChanged()]


def _keypad_select(state: ScanState,
                   predictor: Predictor) -> tuple[ScanState, list[SelectorOutput]]:
    focus = state.focus
    if focus < 6:  # digit keys 1..6
        code = state.composed_code + str(focus + 1)
        return replace(state, composed_code=code,
                       suggestions=_refresh(code, predictor)), [StateChanged()]

    if focus == _KEY_SUGGEST:
        if not state.suggestions:
            return state, []
        return replace(state, panel=Panel.SUGGESTION, focus=0), [StateChanged()]

    if focus == _KEY_SPACE:
        if not state.suggestions:
            return state, []
        word = state.suggestions[0]
        return replace(state, composed_code="", suggestions=(),
                       composed_text=state.composed_text + word + " "), [StateChanged()]

    if focus == _KEY_DELETE:
        if state.composed_code:
            code = state.composed_code[:-1]
            return replace(state, composed_code=code,
                           suggestions=_refresh(code, predictor)), [StateChanged()]
        if state.composed_text:
            return replace(state, composed_text=_drop_last_word(state.composed_text)), [StateChanged()]
        return state, []

    # SPEAK: broadcast the composed text and come home; an uncommitted code
    # survives so composing can resume where it left off.
    text = state.composed_text
    next_state = replace(state, panel=Panel.MODE, focus=0, composed_text="")
    return next_state, [TextEmitted(text), SpeechRequested(text)]


def _refresh(code: str, predictor: Predictor) -> tuple[str, ...]:
    return tuple(predictor(code)) if code else ()


def _drop_last_word(text: str) -> str:
    head, _, _ = text.rstrip().rpartition(" ")
    return head + " " if head else ""
