"""Best-path decoding (scheme ``dec-bp``).

Takes the most confident symbol per frame, then collapses the resulting
path. The reported score is that path's log probability, not the string
marginal.
"""

from __future__ import annotations

import numpy as np

from .ctc import collapse, path_log_score
from .matrix import ConfidenceMatrix
from .types import Hypothesis


def decode_best_path(matrix: ConfidenceMatrix) -> Hypothesis:
    """Greedy per-frame argmax decode; ties go to the lowest symbol index."""
    labels = np.argmax(matrix.probs, axis=1)
    text = collapse(labels, matrix.alphabet)
    score = path_log_score(matrix, labels)
    confs = _word_confidences(matrix, labels)
    return Hypothesis(text=text, score=score, word_confidences=confs)


def _word_confidences(matrix: ConfidenceMatrix, labels: np.ndarray) -> tuple[float, ...]:
    """Per-word minimum of the per-frame maximum confidence, over the frames
    the argmax path spends on the word (including NaC gaps inside it)."""
    alphabet = matrix.alphabet
    nac = alphabet.nac_index
    frame_max = matrix.probs[np.arange(matrix.num_frames), labels]

    # Maximal runs of identical labels; non-NaC runs emit one character each.
    chars: list[tuple[str, int, int]] = []
    t = 0
    n = len(labels)
    while t < n:
        u = t
        while u < n and labels[u] == labels[t]:
            u += 1
        if labels[t] != nac:
            chars.append((alphabet.symbols[labels[t]], t, u))
        t = u

    sep = alphabet.separator
    confs: list[float] = []
    start = end = None
    for ch, s, e in chars + ([(sep, -1, -1)] if sep is not None else []):
        if sep is not None and ch == sep:
            if start is not None:
                confs.append(float(frame_max[start:end].min()))
                start = None
        else:
            if start is None:
                start = s
            end = e
    if sep is None and chars:
        confs.append(float(frame_max[chars[0][1] : chars[-1][2]].min()))
    return tuple(confs)
