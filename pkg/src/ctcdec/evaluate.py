"""Edit-distance evaluation: CER, WER, and expert ranking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .alphabet import Alphabet, normalize_transcript
from .errors import LengthMismatch
from .types import Hypothesis


@dataclass(frozen=True)
class EditOps:
    """Operation counts from one optimal traceback."""

    matches: int = 0
    substitutions: int = 0
    deletions: int = 0
    insertions: int = 0

    def __add__(self, other: "EditOps") -> "EditOps":
        return EditOps(
            self.matches + other.matches,
            self.substitutions + other.substitutions,
            self.deletions + other.deletions,
            self.insertions + other.insertions,
        )

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions


def edit_distance(a: Sequence, b: Sequence) -> tuple[int, EditOps]:
    """Levenshtein distance from reference ``a`` to hypothesis ``b``.

    Unit costs; deletions are reference tokens missing from ``b``,
    insertions are extra tokens in ``b``. Ties in the traceback prefer
    match > substitution > deletion > insertion.
    """
    n, m = len(a), len(b)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[i][0] = i
    for j in range(1, m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        row = dist[i]
        prev = dist[i - 1]
        ai = a[i - 1]
        for j in range(1, m + 1):
            row[j] = min(
                prev[j - 1] + (0 if ai == b[j - 1] else 1),
                prev[j] + 1,
                row[j - 1] + 1,
            )

    matches = subs = dels = ins = 0
    i, j = n, m
    while i > 0 or j > 0:
        here = dist[i][j]
        if i > 0 and j > 0 and a[i - 1] == b[j - 1] and here == dist[i - 1][j - 1]:
            matches += 1
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and here == dist[i - 1][j - 1] + 1:
            subs += 1
            i, j = i - 1, j - 1
        elif i > 0 and here == dist[i - 1][j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return dist[n][m], EditOps(matches, subs, dels, ins)


@dataclass(frozen=True)
class LineScore:
    char_distance: int
    char_ref_len: int
    word_distance: int
    word_ref_len: int
    char_ops: EditOps
    word_ops: EditOps


def _rate(errors: int, total: int) -> float:
    if total == 0:
        return 0.0 if errors == 0 else float("inf")
    return errors / total


@dataclass(frozen=True)
class EvalReport:
    """Per-line distances and aggregate CER/WER."""

    lines: tuple[LineScore, ...]

    @property
    def cer(self) -> float:
        return _rate(
            sum(s.char_distance for s in self.lines),
            sum(s.char_ref_len for s in self.lines),
        )

    @property
    def wer(self) -> float:
        return _rate(
            sum(s.word_distance for s in self.lines),
            sum(s.word_ref_len for s in self.lines),
        )

    @property
    def char_ops(self) -> EditOps:
        total = EditOps()
        for s in self.lines:
            total = total + s.char_ops
        return total

    @property
    def word_ops(self) -> EditOps:
        total = EditOps()
        for s in self.lines:
            total = total + s.word_ops
        return total


def _words(text: str, separator: str | None) -> list[str]:
    tokens = text.split(separator) if separator is not None else text.split()
    return [t for t in tokens if t]


def evaluate(
    hyps: Sequence[Hypothesis | str],
    refs: Sequence[str],
    alphabet: Alphabet,
) -> EvalReport:
    """Score hypotheses against references.

    Both sides are normalized through the alphabet's mapping first, so
    scoring is invariant under transcript normalization. Case- and
    punctuation-sensitive.
    """
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    lines = []
    for hyp, ref in zip(hyps, refs):
        hyp_text = hyp.text if isinstance(hyp, Hypothesis) else hyp
        hyp_text = normalize_transcript(hyp_text, alphabet)
        ref_text = normalize_transcript(ref, alphabet)
        char_dist, char_ops = edit_distance(ref_text, hyp_text)
        ref_words = _words(ref_text, alphabet.separator)
        hyp_words = _words(hyp_text, alphabet.separator)
        word_dist, word_ops = edit_distance(ref_words, hyp_words)
        lines.append(
            LineScore(
                char_distance=char_dist,
                char_ref_len=len(ref_text),
                word_distance=word_dist,
                word_ref_len=len(ref_words),
                char_ops=char_ops,
                word_ops=word_ops,
            )
        )
    return EvalReport(lines=tuple(lines))


def rank_experts(reports: Sequence[EvalReport]) -> list[int]:
    """Expert indices sorted by ascending WER, then CER, then input order."""
    if not reports:
        raise ValueError("need at least one report")
    return sorted(range(len(reports)), key=lambda i: (reports[i].wer, reports[i].cer))
