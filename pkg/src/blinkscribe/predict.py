"""T6 predictive text: digit encoding, trie, breadth-first suggestion, index.

Six keys cover the alphabet, five letters per key and Z alone on key 6:

    1 ABCDE   2 FGHIJ   3 KLMNO   4 PQRST   5 UVWXY   6 Z

A word's code is its letters mapped through this table ("apple" -> "14431").
Suggestions for a digit prefix are found by breadth-first traversal of a trie
keyed by digits, which yields shorter completions before longer ones; ties at
one depth resolve by ascending digit, then by dictionary order within a node.

An index file of precompiled results for every short prefix can be built
ahead of time so lookups for common prefixes skip the traversal entirely.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

logger = logging.getLogger(__name__)

KEY_LETTERS = ("abcde", "fghij", "klmno", "pqrst", "uvwxy", "z")
LETTER_TO_DIGIT = {ch: str(key + 1) for key, letters in enumerate(KEY_LETTERS) for ch in letters}

NUM_WORDS_DEFAULT = 5
MAX_SEARCH_DEFAULT = 10_000

INDEX_MAGIC = "T6INDEX v1"


class InvalidCharacter(ValueError):
    """Word contains a character outside a-z."""


class NoSuchPrefix(LookupError):
    """No dictionary word extends this input."""


def encode(word: str) -> str:
    """Map a lowercase a-z word to its T6 digit string."""
    if not word:
        raise InvalidCharacter("empty word")
    try:
        return "".join(LETTER_TO_DIGIT[ch] for ch in word)
    except KeyError as exc:
        raise InvalidCharacter(f"character {exc.args[0]!r} in {word!r} is not a-z") from None


@dataclass(frozen=True)
class Suggestion:
    word: str
    code: str
    rank: int


@dataclass(frozen=True)
class SearchBudget:
    num_words: int = NUM_WORDS_DEFAULT
    max_search: int = MAX_SEARCH_DEFAULT  # nodes dequeued before giving up

    def __post_init__(self):
        if self.num_words <= 0 or self.max_search <= 0:
            raise ValueError("budget fields must be strictly positive")


class TrieNode:
    __slots__ = ("children", "words")

    def __init__(self):
        self.children: dict[str, TrieNode] = {}
        self.words: list[str] = []  # non-empty marks a complete-word node

    @property
    def is_word_node(self) -> bool:
        return bool(self.words)


class T6Trie:
    """Digit-keyed trie; a word lives at the node addressed by its full code."""

    def __init__(self):
        self.root = TrieNode()
        self.word_count = 0

    def insert(self, word: str) -> None:
        node = self.root
        for digit in encode(word):
            child = node.children.get(digit)
            if child is None:
                child = node.children[digit] = TrieNode()
            node = child
        node.words.append(word)
        self.word_count += 1

    def walk(self, prefix: str) -> TrieNode | None:
        """Node addressed by a digit prefix, or None when absent."""
        node = self.root
        for digit in prefix:
            node = node.children.get(digit)
            if node is None:
                return None
        return node


def build_trie(dictionary: list[str]) -> T6Trie:
    """Insert the words of a normalized dictionary, preserving their order."""
    trie = T6Trie()
    for word in dictionary:
        trie.insert(word)
    return trie


def advance(cursor: TrieNode, digit: int) -> TrieNode:
    """Follow one digit edge from the cursor.

    Raises NoSuchPrefix when no word extends the input this way; the caller
    keeps its old cursor.  Digits outside 1..=6 are a usage error.
    """
    if not 1 <= digit <= 6:
        raise ValueError(f"digit out of range: {digit}")
    child = cursor.children.get(str(digit))
    if child is None:
        raise NoSuchPrefix(f"no word continues with digit {digit}")
    return child


def suggest(trie: T6Trie, prefix: str, budget: SearchBudget | None = None) -> list[Suggestion]:
    """Ranked completions for a digit prefix, breadth-first.

    Children are visited in ascending digit order and a node's words are
    appended in stored order when the node is dequeued, so results come out
    ordered by (code length, code, dictionary order).  Traversal stops once
    num_words words are collected, the queue empties, or max_search nodes
    have been dequeued.  A missing prefix is an empty result, not an error.
    """
    if budget is None:
        budget = SearchBudget()
    start = trie.walk(prefix)
    if start is None:
        return []
    collected: list[tuple[str, str]] = []  # (word, code)
    queue: deque[tuple[TrieNode, str]] = deque([(start, prefix)])
    remaining = budget.max_search
    while len(collected) < budget.num_words and queue and remaining > 0:
        node, code = queue.popleft()
        remaining -= 1
        for digit in sorted(node.children):
            queue.append((node.children[digit], code + digit))
        collected.extend((word, code) for word in node.words)
    return [
        Suggestion(word, code, rank)
        for rank, (word, code) in enumerate(collected[: budget.num_words])
    ]


@dataclass(frozen=True)
class T6Index:
    """Precompiled prefix -> words table for codes up to max_len digits."""

    max_len: int
    num_words: int
    records: dict[str, tuple[str, ...]]

    def lookup(self, prefix: str) -> list[str] | None:
        """Stored words for a code, or None when the index cannot answer.

        Absent either because the prefix is longer than the index depth or
        because no word matches; callers fall back to suggest().
        """
        if len(prefix) > self.max_len:
            return None
        hit = self.records.get(prefix)
        return list(hit) if hit is not None else None


def build_index(dictionary: list[str], max_code_len: int,
                num_words: int = NUM_WORDS_DEFAULT) -> T6Index:
    """Precompute suggestions for every populated code of length <= max_code_len."""
    if max_code_len < 1:
        raise ValueError("max_code_len must be positive")
    trie = build_trie(dictionary)
    prefixes: set[str] = set()
    for word in dictionary:
        code = encode(word)
        for length in range(1, min(len(code), max_code_len) + 1):
            prefixes.add(code[:length])
    unbounded = SearchBudget(num_words=num_words, max_search=2**31)
    records = {
        prefix: tuple(s.word for s in suggest(trie, prefix, unbounded))
        for prefix in prefixes
    }
    return T6Index(max_code_len, num_words, records)


def write_index(index: T6Index, path: str) -> None:
    """Write the line-oriented index file, records sorted by (length, code)."""
    lines = [f"{INDEX_MAGIC} max_len={index.max_len} k={index.num_words}"]
    for code in sorted(index.records, key=lambda c: (len(c), c)):
        lines.append(f"{code}\t{','.join(index.records[code])}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_index(path: str) -> T6Index:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        parts = header.split()
        if parts[:2] != INDEX_MAGIC.split() or len(parts) != 4:
            raise ValueError(f"not a T6 index file: {path}")
        max_len = int(parts[2].removeprefix("max_len="))
        num_words = int(parts[3].removeprefix("k="))
        records: dict[str, tuple[str, ...]] = {}
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            code, _, words = line.partition("\t")
            records[code] = tuple(w for w in words.split(",") if w)
    return T6Index(max_len, num_words, records)


def load_dictionary(path: str) -> tuple[list[str], int]:
    """Load one word per line, lowercased and deduplicated.

    Entries with characters outside a-z are rejected; returns the accepted
    words in file order plus the rejected-entry count.
    """
    words: list[str] = []
    seen: set[str] = set()
    rejected = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if not word:
                continue
            if not word.isascii() or not word.isalpha():
                rejected += 1
                continue
            if word in seen:
                continue
            seen.add(word)
            words.append(word)
    if rejected:
        logger.warning("%s: rejected %d entries with characters outside a-z", path, rejected)
    return words, rejected


class Suggester:
    """suggest() behind an optional precompiled index fast path."""

    def __init__(self, trie: T6Trie, num_words: int = NUM_WORDS_DEFAULT,
                 max_search: int = MAX_SEARCH_DEFAULT, index: T6Index | None = None):
        self.trie = trie
        self.budget = SearchBudget(num_words, max_search)
        self.index = index

    def words_for(self, code: str) -> list[str]:
        if not code:
            return []
        if self.index is not None and self.index.num_words >= self.budget.num_words:
            hit = self.index.lookup(code)
            if hit is not None:
                return hit[: self.budget.num_words]
        return [s.word for s in suggest(self.trie, code, self.budget)]
