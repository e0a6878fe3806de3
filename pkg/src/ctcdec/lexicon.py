"""Word lexicons: a prefix trie with unigram frequencies."""

from __future__ import annotations

import math
from collections import Counter
from pathlib import Path
from typing import Iterable, Mapping

from .alphabet import Alphabet
from .errors import InvalidSymbol, ParseError

#: Punctuation that may attach to word boundaries without dictionary
#: membership (mirrors the stock expression-rule attach class).
DEFAULT_ATTACH_CHARS = frozenset('.,:;!?"()[]£$')


class Lexicon:
    """Prefix trie over words with occurrence counts.

    ``separator`` is the symbol permitted between words; ``attach_chars``
    are the punctuation symbols that may wrap a word without being part of
    it. Immutable after construction.
    """

    def __init__(
        self,
        counts: Mapping[str, int],
        separator: str | None = " ",
        attach_chars: frozenset[str] = DEFAULT_ATTACH_CHARS,
    ):
        for word, count in counts.items():
            if not word:
                raise ValueError("lexicon words must be non-empty")
            if count < 1:
                raise ValueError(f"count for {word!r} must be >= 1, got {count}")
            if separator is not None and separator in word:
                raise ValueError(f"word {word!r} contains the separator symbol")
        self._counts = dict(sorted(counts.items()))
        self.separator = separator
        self.attach_chars = frozenset(attach_chars)
        self._total = sum(self._counts.values())

        # Trie as parallel lists: children maps, and the word ending at a node.
        self._children: list[dict[str, int]] = [{}]
        self._word_at: list[str | None] = [None]
        for word in self._counts:
            node = 0
            for ch in word:
                nxt = self._children[node].get(ch)
                if nxt is None:
                    nxt = len(self._children)
                    self._children[node][ch] = nxt
                    self._children.append({})
                    self._word_at.append(None)
                node = nxt
            self._word_at[node] = word

    def __len__(self) -> int:
        return len(self._counts)

    def __contains__(self, word: str) -> bool:
        return word in self._counts

    @property
    def total_count(self) -> int:
        return self._total

    @property
    def counts(self) -> Mapping[str, int]:
        return dict(self._counts)

    def count(self, word: str) -> int:
        return self._counts.get(word, 0)

    def log_unigram(self, word: str) -> float:
        """log(count / total); -inf for unknown words."""
        c = self._counts.get(word)
        if c is None or self._total == 0:
            return float("-inf")
        return math.log(c) - math.log(self._total)

    # Trie navigation (nodes are ints, root is 0).
    ROOT = 0

    def child(self, node: int, ch: str) -> int | None:
        return self._children[node].get(ch)

    def word_ending_at(self, node: int) -> str | None:
        return self._word_at[node]

    def node_best_completion(self, score: "dict[str, float] | None" = None) -> list[float]:
        """Per trie node, the best score of any word at or below it.

        ``score`` maps words to scores (default: log unigram). Used as a
        look-ahead when ranking in-progress words during beam search.
        """
        if score is None:
            score = {w: self.log_unigram(w) for w in self._counts}
        best = [float("-inf")] * len(self._children)
        # Children always have larger ids than their parent, so a reverse
        # sweep propagates bottom-up.
        for node in range(len(self._children) - 1, -1, -1):
            word = self._word_at[node]
            if word is not None:
                best[node] = max(best[node], score[word])
            for child in self._children[node].values():
                best[node] = max(best[node], best[child])
        return best


def strip_attached(token: str, attach_chars: frozenset[str]) -> str:
    """Remove attaching punctuation from both ends of a token."""
    start, end = 0, len(token)
    while start < end and token[start] in attach_chars:
        start += 1
    while end > start and token[end - 1] in attach_chars:
        end -= 1
    return token[start:end]


def build_lexicon(
    corpus: Iterable[str],
    alphabet: Alphabet,
    attach_chars: frozenset[str] | None = None,
) -> Lexicon:
    """Count word occurrences in normalized transcripts.

    Transcripts are tokenized on the alphabet's separator symbol and
    attaching punctuation is stripped from token edges; empty cores (pure
    punctuation tokens) are dropped. Transcripts must already be
    normalized; an out-of-alphabet character raises
    :class:`InvalidSymbol`.
    """
    attach = DEFAULT_ATTACH_CHARS if attach_chars is None else frozenset(attach_chars)
    attach = attach & alphabet.printable_symbols
    counts: Counter[str] = Counter()
    for line in corpus:
        for ch in line:
            if ch not in alphabet.printable_symbols:
                raise InvalidSymbol(f"corpus character {ch!r} is not a printable alphabet symbol")
        tokens = line.split(alphabet.separator) if alphabet.separator else [line]
        for token in tokens:
            core = strip_attached(token, attach)
            if core:
                counts[core] += 1
    return Lexicon(counts, separator=alphabet.separator, attach_chars=attach)


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    """Write ``<count>\\t<word>`` lines, most frequent first."""
    items = sorted(lexicon.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    with open(path, "w", encoding="utf-8") as fh:
        for word, count in items:
            fh.write(f"{count}\t{word}\n")


def load_lexicon(
    path: str | Path,
    separator: str | None = " ",
    attach_chars: frozenset[str] = DEFAULT_ATTACH_CHARS,
) -> Lexicon:
    """Read ``<count>\\t<word>`` lines."""
    counts: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            try:
                count_str, word = line.split("\t", 1)
                count = int(count_str)
            except ValueError:
                raise ParseError(lineno, f"expected '<count>\\t<word>', got {line!r}") from None
            if not word or count < 1:
                raise ParseError(lineno, f"invalid lexicon entry {line!r}")
            counts[word] = counts.get(word, 0) + count
    return Lexicon(counts, separator=separator, attach_chars=attach_chars)
