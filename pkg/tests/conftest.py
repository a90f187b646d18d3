import json
import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))  # for tests.util as `util`

from blinkscribe.predict import Suggester, build_trie
from blinkscribe.selector import PanelCatalog
from blinkscribe.session import SessionConfig, SessionCore

ASSETS = pathlib.Path(__file__).resolve().parent.parent / "assets"

SAMPLE_WORDS = ["there", "their", "answer", "any", "bye"]


@pytest.fixture
def sample_words():
    return list(SAMPLE_WORDS)


@pytest.fixture
def sample_trie():
    return build_trie(SAMPLE_WORDS)


@pytest.fixture
def assets_dir():
    return ASSETS


def make_core(words=SAMPLE_WORDS, *, threshold=80, refractory_ms=500, dwell_ms=1000,
              num_words=5, catalog=None) -> SessionCore:
    config = SessionConfig(
        dictionary_path="<inline>",
        blink_threshold=threshold,
        refractory_ms=refractory_ms,
        dwell_ms=dwell_ms,
        num_words=num_words,
    )
    suggester = Suggester(build_trie(words), num_words=num_words)
    return SessionCore(config, suggester, catalog or PanelCatalog.default())


@pytest.fixture
def core():
    return make_core()


def write_capture_file(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for t_ms, data in records:
            fh.write(json.dumps({"t_ms": t_ms, "data": data.hex()}) + "\n")
    return path
