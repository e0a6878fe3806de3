import math

import pytest

from ctcdec import (
    InvalidSymbol,
    Lexicon,
    ParseError,
    build_lexicon,
    default_alphabet,
    load_lexicon,
    save_lexicon,
)
from ctcdec.lexicon import strip_attached

ALPHA = default_alphabet()


def test_build_counts_words():
    lex = build_lexicon(["the cat", "the hat"], ALPHA)
    assert lex.counts == {"the": 2, "cat": 1, "hat": 1}
    assert lex.total_count == 4


def test_build_empty_corpus():
    lex = build_lexicon([], ALPHA)
    assert len(lex) == 0
    assert lex.total_count == 0


def test_build_strips_attached_punctuation():
    lex = build_lexicon(["Hello, world."], ALPHA)
    assert lex.counts == {"Hello": 1, "world": 1}


def test_build_keeps_internal_punctuation():
    lex = build_lexicon(["don't (really)"], ALPHA)
    assert lex.counts == {"don't": 1, "really": 1}


def test_build_drops_pure_punctuation_tokens():
    lex = build_lexicon(["... yes"], ALPHA)
    assert lex.counts == {"yes": 1}


def test_build_rejects_out_of_alphabet():
    with pytest.raises(InvalidSymbol):
        build_lexicon(["café"], ALPHA)


def test_strip_attached():
    attach = frozenset('.,"')
    assert strip_attached('"word,"', attach) == "word"
    assert strip_attached("...", attach) == ""
    assert strip_attached("a.b", attach) == "a.b"


def test_words_validate():
    with pytest.raises(ValueError):
        Lexicon({"": 1})
    with pytest.raises(ValueError):
        Lexicon({"ok": 0})
    with pytest.raises(ValueError):
        Lexicon({"two words": 1}, separator=" ")


def test_log_unigram():
    lex = Lexicon({"the": 3, "cat": 1})
    assert lex.log_unigram("the") == pytest.approx(math.log(0.75))
    assert lex.log_unigram("dog") == float("-inf")


def test_trie_navigation():
    lex = Lexicon({"ab": 2, "abc": 1, "b": 1})
    node = lex.child(Lexicon.ROOT, "a")
    assert node is not None
    assert lex.word_ending_at(node) is None
    node = lex.child(node, "b")
    assert lex.word_ending_at(node) == "ab"
    assert lex.child(node, "z") is None


def test_node_best_completion():
    lex = Lexicon({"ab": 9, "abc": 1})
    best = lex.node_best_completion()
    a = lex.child(Lexicon.ROOT, "a")
    # Best completion below "a" is the frequent "ab".
    assert best[a] == pytest.approx(math.log(0.9))
    abc = lex.child(lex.child(a, "b"), "c")
    assert best[abc] == pytest.approx(math.log(0.1))


def test_save_load_round_trip(tmp_path):
    lex = build_lexicon(["the cat sat", "the hat"], ALPHA)
    path = tmp_path / "words.tsv"
    save_lexicon(lex, path)
    again = load_lexicon(path, separator=" ")
    assert again.counts == lex.counts
    assert path.read_text(encoding="utf-8").splitlines()[0] == "2\tthe"


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("notanumber\tword\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_lexicon(path)
    path.write_text("0\tword\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_lexicon(path)
