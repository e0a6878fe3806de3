"""Confidence matrices: per-frame symbol probability distributions."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .alphabet import Alphabet
from .errors import InvariantViolation

#: Row sums within this tolerance are accepted as normalized.
ROW_SUM_TOLERANCE = 1e-6
#: Row sums off by more than this are rejected outright.
ROW_SUM_REJECT = 1e-3


@dataclass(frozen=True)
class ConfidenceMatrix:
    """T x S matrix of per-frame symbol probabilities.

    Rows index frames (horizontal positions along a text line), columns
    index alphabet symbols. Immutable after construction.
    """

    probs: np.ndarray
    alphabet: Alphabet

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(np.asarray(self.probs, dtype=np.float64))
        if arr.ndim != 2:
            raise InvariantViolation(f"matrix must be 2-D, got shape {arr.shape}")
        t, s = arr.shape
        if t < 1:
            raise InvariantViolation("matrix needs at least one frame")
        if s != len(self.alphabet):
            raise InvariantViolation(
                f"matrix has {s} columns but the alphabet has {len(self.alphabet)} symbols"
            )
        if not np.all(np.isfinite(arr)):
            raise InvariantViolation("matrix entries must be finite")
        if np.any(arr < 0):
            raise InvariantViolation("matrix entries must be nonnegative")
        dev = np.abs(arr.sum(axis=1) - 1.0)
        worst = int(np.argmax(dev))
        if dev[worst] > ROW_SUM_TOLERANCE:
            raise InvariantViolation(
                f"row {worst} sums to {arr[worst].sum():.9f} (tolerance {ROW_SUM_TOLERANCE})"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)

    @property
    def num_frames(self) -> int:
        return self.probs.shape[0]

    @property
    def num_symbols(self) -> int:
        return self.probs.shape[1]

    @classmethod
    def from_rows(cls, rows, alphabet: Alphabet) -> "ConfidenceMatrix":
        """Build a matrix from raw rows, applying the row-sum policy.

        Rows off by at most ``ROW_SUM_TOLERANCE`` pass unchanged; rows off
        by up to ``ROW_SUM_REJECT`` are renormalized with a warning (real
        network outputs carry serialization rounding); anything worse
        raises :class:`InvariantViolation`.
        """
        arr = np.asarray(rows, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise InvariantViolation(f"expected a T x S matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvariantViolation("matrix entries must be finite")
        if np.any(arr < 0):
            raise InvariantViolation("matrix entries must be nonnegative")
        sums = arr.sum(axis=1)
        dev = np.abs(sums - 1.0)
        if np.any(dev > ROW_SUM_REJECT):
            worst = int(np.argmax(dev))
            raise InvariantViolation(
                f"row {worst} sums to {sums[worst]:.9f}, off by more than {ROW_SUM_REJECT}"
            )
        loose = dev > ROW_SUM_TOLERANCE
        if np.any(loose):
            warnings.warn(
                f"renormalized {int(loose.sum())} row(s) with sums off by up to "
                f"{dev.max():.2e}",
                stacklevel=2,
            )
            arr = arr / sums[:, None]
        return cls(arr, alphabet)


def detect_boundaries(
    matrix: ConfidenceMatrix, threshold: float = 0.5
) -> list[tuple[int, int]]:
    """Maximal frame intervals where NaC confidence is at least ``threshold``.

    High NaC confidence marks inter-character gaps. Returns disjoint,
    sorted, end-exclusive ``(start, end)`` intervals within ``[0, T)``.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    mask = matrix.probs[:, matrix.alphabet.nac_index] >= threshold
    intervals: list[tuple[int, int]] = []
    start = None
    for t, hit in enumerate(mask):
        if hit and start is None:
            start = t
        elif not hit and start is not None:
            intervals.append((start, t))
            start = None
    if start is not None:
        intervals.append((start, matrix.num_frames))
    return intervals
