"""Path collapse rules and exact CTC probability computation.

A path is one symbol index per frame. The collapse to a string applies two
steps in this exact order: merge maximal runs of identical labels into one
label, then delete NaC. The order matters: NaC between two equal labels
separates a genuine repetition, NaC-free runs merge.
"""

from __future__ import annotations

import math

import numpy as np

from .alphabet import Alphabet
from .errors import InvalidSymbol, LengthMismatch
from .matrix import ConfidenceMatrix
from .types import Path

NEG_INF = float("-inf")


def logadd(a: float, b: float) -> float:
    """log(exp(a) + exp(b)) without leaving the log domain."""
    if a < b:
        a, b = b, a
    if b == NEG_INF:
        return a
    return a + math.log1p(math.exp(b - a))


def collapse(path: Path, alphabet: Alphabet) -> str:
    """Collapse a path to a string: merge runs, then delete NaC."""
    size = len(alphabet)
    merged: list[int] = []
    prev = -1
    for idx in path:
        if not 0 <= idx < size:
            raise InvalidSymbol(f"label {idx} out of range for alphabet of size {size}")
        if idx != prev:
            merged.append(idx)
            prev = idx
    nac = alphabet.nac_index
    return "".join(alphabet.symbols[i] for i in merged if i != nac)


def path_log_score(matrix: ConfidenceMatrix, path: Path) -> float:
    """Log probability of a single path; -inf if any factor is zero."""
    labels = np.asarray(path, dtype=np.intp)
    if labels.shape != (matrix.num_frames,):
        raise LengthMismatch(
            f"path has {labels.shape[0] if labels.ndim == 1 else '?'} labels, "
            f"matrix has {matrix.num_frames} frames"
        )
    if labels.size and (labels.min() < 0 or labels.max() >= matrix.num_symbols):
        raise InvalidSymbol("path label out of range")
    factors = matrix.probs[np.arange(matrix.num_frames), labels]
    if np.any(factors == 0.0):
        return NEG_INF
    return float(np.log(factors).sum())


def _text_to_indices(text: str, alphabet: Alphabet) -> list[int]:
    indices = []
    for ch in text:
        idx = alphabet.index_of.get(ch)
        if idx is None or idx == alphabet.nac_index:
            raise InvalidSymbol(f"symbol {ch!r} is not a printable alphabet symbol")
        indices.append(idx)
    return indices


def _interleaved(text_indices: list[int], nac: int) -> np.ndarray:
    """State labels [NaC, c1, NaC, c2, ..., cN, NaC]."""
    ext = np.empty(2 * len(text_indices) + 1, dtype=np.intp)
    ext[0::2] = nac
    ext[1::2] = text_indices
    return ext


def string_log_score(matrix: ConfidenceMatrix, text: str) -> float:
    """Exact log marginal probability of ``text``: the sum over all paths
    that collapse to it, via the standard forward dynamic program over the
    text interleaved with optional NaCs. Returns -inf when no path exists
    (text too long for T, or repeated characters needing more frames).
    """
    indices = _text_to_indices(text, matrix.alphabet)
    nac = matrix.alphabet.nac_index
    ext = _interleaved(indices, nac)
    n_states = ext.shape[0]
    with np.errstate(divide="ignore"):
        logp = np.log(matrix.probs)

    # A jump from state s-2 is allowed into non-NaC states whose symbol
    # differs from the one two states back (repeats must pass through NaC).
    jump_ok = np.zeros(n_states, dtype=bool)
    if n_states >= 3:
        jump_ok[2:] = (ext[2:] != nac) & (ext[2:] != ext[:-2])

    alpha = np.full(n_states, NEG_INF)
    alpha[0] = logp[0, nac]
    if n_states > 1:
        alpha[1] = logp[0, ext[1]]

    for t in range(1, matrix.num_frames):
        stay = alpha
        step = np.concatenate(([NEG_INF], alpha[:-1]))
        jump = np.concatenate(([NEG_INF, NEG_INF], alpha[:-2]))
        jump = np.where(jump_ok, jump, NEG_INF)
        alpha = np.logaddexp(np.logaddexp(stay, step), jump) + logp[t, ext]

    if n_states == 1:
        return float(alpha[0])
    return float(np.logaddexp(alpha[-1], alpha[-2]))


def force_align(matrix: ConfidenceMatrix, text: str) -> list[tuple[int, int]]:
    """Viterbi alignment of ``text`` to the matrix.

    Returns one end-exclusive frame interval per character of ``text``
    (the frames whose best path emits that character). Raises
    :class:`LengthMismatch` when no valid alignment exists.
    """
    indices = _text_to_indices(text, matrix.alphabet)
    nac = matrix.alphabet.nac_index
    ext = _interleaved(indices, nac)
    n_states = ext.shape[0]
    n_frames = matrix.num_frames
    with np.errstate(divide="ignore"):
        logp = np.log(matrix.probs)

    jump_ok = np.zeros(n_states, dtype=bool)
    if n_states >= 3:
        jump_ok[2:] = (ext[2:] != nac) & (ext[2:] != ext[:-2])

    score = np.full((n_frames, n_states), NEG_INF)
    back = np.zeros((n_frames, n_states), dtype=np.intp)
    score[0, 0] = logp[0, nac]
    if n_states > 1:
        score[0, 1] = logp[0, ext[1]]
        back[0, 1] = 1
    back[0, 0] = 0

    for t in range(1, n_frames):
        stay = score[t - 1]
        step = np.concatenate(([NEG_INF], stay[:-1]))
        jump = np.concatenate(([NEG_INF, NEG_INF], stay[:-2]))
        jump = np.where(jump_ok, jump, NEG_INF)
        # Prefer staying on ties, then a single step, then a jump.
        idx = np.arange(n_states)
        best = stay.copy()
        src = idx.copy()
        better = step > best
        best = np.where(better, step, best)
        src = np.where(better, idx - 1, src)
        better = jump > best
        best = np.where(better, jump, best)
        src = np.where(better, idx - 2, src)
        score[t] = best + logp[t, ext]
        back[t] = src

    end_candidates = [n_states - 1] + ([n_states - 2] if n_states > 1 else [])
    end = max(end_candidates, key=lambda s: score[n_frames - 1, s])
    if score[n_frames - 1, end] == NEG_INF:
        raise LengthMismatch(f"no valid alignment of {text!r} in {n_frames} frames")

    states = np.empty(n_frames, dtype=np.intp)
    cur = end
    for t in range(n_frames - 1, -1, -1):
        states[t] = cur
        cur = back[t, cur]

    spans: list[tuple[int, int]] = []
    for i in range(len(indices)):
        frames = np.nonzero(states == 2 * i + 1)[0]
        spans.append((int(frames[0]), int(frames[-1]) + 1))
    return spans


def word_spans(
    matrix: ConfidenceMatrix, text: str, separator: str | None
) -> list[tuple[str, int, int]]:
    """Per-word frame spans of a decoded text, from its Viterbi alignment.

    Words are the separator-split tokens of ``text``; each span runs from
    the first frame of the word's first character to the last frame of its
    last character (end-exclusive).
    """
    if not text:
        return []
    spans = force_align(matrix, text)
    out: list[tuple[str, int, int]] = []
    start_char = None
    for pos, ch in enumerate(text + (separator or "")):
        if separator is not None and ch == separator:
            if start_char is not None:
                out.append((text[start_char:pos], spans[start_char][0], spans[pos - 1][1]))
                start_char = None
        elif start_char is None:
            start_char = pos
    if separator is None:
        out.append((text, spans[0][0], spans[-1][1]))
    return out


def marginal_word_confidences(
    matrix: ConfidenceMatrix, text: str, separator: str | None
) -> tuple[float, ...]:
    """Per-word confidences: the CTC marginal of each word over the frame
    span it was decoded to, in [0, 1]."""
    confs = []
    for word, start, end in word_spans(matrix, text, separator):
        sub = ConfidenceMatrix(matrix.probs[start:end], matrix.alphabet)
        confs.append(math.exp(string_log_score(sub, word)))
    return tuple(confs)
