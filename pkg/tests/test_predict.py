import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blinkscribe.predict import (
    InvalidCharacter,
    NoSuchPrefix,
    SearchBudget,
    Suggester,
    advance,
    build_index,
    build_trie,
    encode,
    load_dictionary,
    read_index,
    suggest,
    write_index,
)
from util import oracle_encode, oracle_suggest, oracle_suggest_bounded

SAMPLE = ["there", "their", "answer", "any", "bye"]

words_strategy = st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=8)
dict_strategy = st.lists(words_strategy, max_size=50, unique=True)
prefix_strategy = st.text(alphabet="123456", max_size=4)


def suggested_words(trie, prefix, num_words=5, max_search=10_000):
    return [s.word for s in suggest(trie, prefix, SearchBudget(num_words, max_search))]


# -- encode ----------------------------------------------------------------

def test_encode_apple():
    assert encode("apple") == "14431"


def test_encode_z():
    assert encode("z") == "6"


@pytest.mark.parametrize("word,code", [
    ("there", "42141"),
    ("their", "42124"),
    ("answer", "134514"),
    ("any", "135"),
    ("bye", "151"),
])
def test_encode_layout_table(word, code):
    assert encode(word) == code


@pytest.mark.parametrize("bad", ["", "a1", "émigré", "two words", "UPPER"])
def test_encode_rejects_non_lowercase_alpha(bad):
    with pytest.raises(InvalidCharacter):
        encode(bad)


@given(words_strategy)
def test_encode_matches_hand_table(word):
    assert encode(word) == oracle_encode(word)
    assert len(encode(word)) == len(word)


# -- trie ------------------------------------------------------------------

def test_words_live_at_their_full_code(sample_trie):
    assert sample_trie.walk("42141").words == ["there"]
    assert sample_trie.walk("42124").words == ["their"]
    assert sample_trie.walk("135").words == ["any"]


def test_empty_dictionary_builds_bare_root():
    trie = build_trie([])
    assert trie.root.children == {}
    assert trie.word_count == 0


def test_same_code_words_keep_dictionary_order():
    trie = build_trie(["a", "b"])
    assert trie.walk("1").words == ["a", "b"]


def test_intermediate_nodes_are_not_word_nodes(sample_trie):
    assert not sample_trie.walk("42").is_word_node
    assert sample_trie.walk("135").is_word_node


@given(dict_strategy)
@settings(max_examples=150)
def test_every_word_reachable_by_advancing_its_code(dictionary):
    trie = build_trie(dictionary)
    for word in dictionary:
        node = trie.root
        code = encode(word)
        for digit in code:
            node = advance(node, int(digit))
        assert word in node.words
        # step count equals word length by construction of the loop
        assert len(code) == len(word)


# -- advance ----------------------------------------------------------------

def test_advance_follows_edge(sample_trie):
    node = advance(sample_trie.root, 4)
    assert node is sample_trie.walk("4")


def test_advance_missing_edge_raises(sample_trie):
    with pytest.raises(NoSuchPrefix):
        advance(sample_trie.root, 6)


def test_advance_digit_out_of_range(sample_trie):
    with pytest.raises(ValueError):
        advance(sample_trie.walk("135"), 9)
    with pytest.raises(ValueError):
        advance(sample_trie.root, 0)


# -- suggest -----------------------------------------------------------------

def test_suggest_13(sample_trie):
    assert suggested_words(sample_trie, "13", 5, 1000) == ["any", "answer"]


def test_suggest_421(sample_trie):
    assert suggested_words(sample_trie, "421", 5, 1000) == ["their", "there"]


def test_suggest_1(sample_trie):
    assert suggested_words(sample_trie, "1", 5, 1000) == ["any", "bye", "answer"]


def test_suggest_num_words_truncation(sample_trie):
    assert suggested_words(sample_trie, "1", 2, 1000) == ["any", "bye"]


def test_suggest_max_search_counts_dequeues(sample_trie):
    # nodes "1" and "13" hold no words, so tiny budgets return nothing
    assert suggested_words(sample_trie, "1", 5, 1) == []
    assert suggested_words(sample_trie, "1", 5, 2) == []
    assert suggested_words(sample_trie, "1", 5, 5) == ["any"]
    assert suggested_words(sample_trie, "1", 5, 6) == ["any", "bye"]
    assert suggested_words(sample_trie, "1", 5, 9) == ["any", "bye", "answer"]


def test_suggest_missing_prefix_is_empty(sample_trie):
    assert suggested_words(sample_trie, "6") == []
    assert suggested_words(sample_trie, "1111") == []


def test_suggest_codes_and_ranks(sample_trie):
    items = suggest(sample_trie, "1", SearchBudget(5, 1000))
    assert [(s.word, s.code, s.rank) for s in items] == [
        ("any", "135", 0), ("bye", "151", 1), ("answer", "134514", 2),
    ]
    for s in items:
        assert s.code == encode(s.word)
        assert s.code.startswith("1")


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        SearchBudget(0, 10)
    with pytest.raises(ValueError):
        SearchBudget(5, 0)


@given(dict_strategy, prefix_strategy, st.integers(1, 10))
@settings(max_examples=300)
def test_suggest_matches_filter_sort_oracle(dictionary, prefix, k):
    trie = build_trie(dictionary)
    got = suggested_words(trie, prefix, k, max_search=2**31)
    assert got == oracle_suggest(dictionary, prefix, k)


@given(dict_strategy, prefix_strategy, st.integers(1, 10), st.integers(1, 40))
@settings(max_examples=300)
def test_suggest_matches_budgeted_oracle(dictionary, prefix, k, max_search):
    trie = build_trie(dictionary)
    got = suggested_words(trie, prefix, k, max_search)
    assert got == oracle_suggest_bounded(dictionary, prefix, k, max_search)


@given(dict_strategy, prefix_strategy, st.integers(1, 8), st.integers(1, 30))
@settings(max_examples=200)
def test_growing_max_search_extends_results(dictionary, prefix, k, max_search):
    trie = build_trie(dictionary)
    small = suggested_words(trie, prefix, k, max_search)
    large = suggested_words(trie, prefix, k, max_search + 7)
    assert large[: len(small)] == small


# -- index -------------------------------------------------------------------

def test_index_records_sample_depth2():
    index = build_index(SAMPLE, 2)
    assert sorted(index.records) == ["1", "13", "15", "4", "42"]
    assert index.records["13"] == ("any", "answer")
    assert index.records["42"] == ("their", "there")


def test_index_lookup_hits_and_misses():
    index = build_index(SAMPLE, 2)
    assert index.lookup("13") == ["any", "answer"]
    assert index.lookup("6") is None
    assert index.lookup("421") is None  # beyond depth, fallback path


def test_index_empty_dictionary():
    index = build_index([], 3)
    assert index.records == {}


def test_index_file_golden(tmp_path):
    path = tmp_path / "words.t6"
    write_index(build_index(SAMPLE, 2), str(path))
    assert path.read_text(encoding="utf-8") == (
        "T6INDEX v1 max_len=2 k=5\n"
        "1\tany,bye,answer\n"
        "4\ttheir,there\n"
        "13\tany,answer\n"
        "15\tbye\n"
        "42\ttheir,there\n"
    )


def test_index_file_round_trip(tmp_path):
    path = tmp_path / "demo.t6"
    index = build_index(SAMPLE, 3)
    write_index(index, str(path))
    loaded = read_index(str(path))
    assert loaded == index


def test_read_index_rejects_other_files(tmp_path):
    path = tmp_path / "nope.t6"
    path.write_text("hello world\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_index(str(path))


@given(dict_strategy, st.integers(1, 4))
@settings(max_examples=100)
def test_index_agrees_with_suggest(dictionary, max_len):
    trie = build_trie(dictionary)
    index = build_index(dictionary, max_len)
    for prefix, stored in index.records.items():
        assert list(stored) == suggested_words(trie, prefix, 5, max_search=2**31)


# -- dictionary loading --------------------------------------------------------

def test_load_dictionary_normalizes(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("Apple\nBANANA\napple\n\ncafé\nx-ray\nzebra\n", encoding="utf-8")
    words, rejected = load_dictionary(str(path))
    assert words == ["apple", "banana", "zebra"]
    assert rejected == 2


def test_load_dictionary_preserves_order(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("bye\nany\nanswer\n", encoding="utf-8")
    words, _ = load_dictionary(str(path))
    assert words == ["bye", "any", "answer"]


# -- suggester ------------------------------------------------------------------

def test_suggester_empty_code_is_empty(sample_trie):
    assert Suggester(sample_trie).words_for("") == []


def test_suggester_with_and_without_index_agree(sample_trie):
    index = build_index(SAMPLE, 2)
    plain = Suggester(sample_trie)
    fast = Suggester(sample_trie, index=index)
    for code in ["1", "13", "15", "42", "421", "6", "135"]:
        assert fast.words_for(code) == plain.words_for(code)


def test_suggester_index_skipped_when_too_shallow(sample_trie):
    # An index built for fewer words than requested cannot serve the query.
    index = build_index(SAMPLE, 2, num_words=1)
    s = Suggester(sample_trie, num_words=3, index=index)
    assert s.words_for("1") == ["any", "bye", "answer"]
