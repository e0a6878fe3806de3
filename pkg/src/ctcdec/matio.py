"""Confidence-matrix file formats.

Text format (UTF-8)::

    CTCMAT v1
    a<TAB>b<TAB><NaC>
    T=3
    0.8<TAB>0.1<TAB>0.1
    ...

Line 2 lists the alphabet symbols tab-separated, with the NaC symbol
written as the literal token ``<NaC>``. The binary variant carries the
same three header lines with magic ``CTCMAT b1``, followed by T*S
little-endian float32 values in row-major order.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .alphabet import NAC_CHAR, Alphabet
from .errors import ParseError
from .matrix import ConfidenceMatrix

TEXT_MAGIC = "CTCMAT v1"
BINARY_MAGIC = "CTCMAT b1"
NAC_TOKEN = "<NaC>"


def _format_alphabet(alphabet: Alphabet) -> str:
    return "\t".join(
        NAC_TOKEN if i == alphabet.nac_index else sym
        for i, sym in enumerate(alphabet.symbols)
    )


def _parse_alphabet(line: str, lineno: int) -> Alphabet:
    tokens = line.split("\t")
    if NAC_TOKEN not in tokens:
        raise ParseError(lineno, f"alphabet line lacks the {NAC_TOKEN} token")
    symbols = tuple(NAC_CHAR if tok == NAC_TOKEN else tok for tok in tokens)
    for sym in symbols:
        if sym != NAC_CHAR and len(sym) != 1:
            raise ParseError(lineno, f"alphabet symbol {sym!r} is not a single character")
    try:
        return Alphabet(
            symbols=symbols,
            nac_index=tokens.index(NAC_TOKEN),
            separator=" " if " " in symbols else None,
        )
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None


def _parse_frame_count(line: str, lineno: int) -> int:
    if not line.startswith("T="):
        raise ParseError(lineno, f"expected 'T=<int>', got {line!r}")
    try:
        count = int(line[2:])
    except ValueError:
        raise ParseError(lineno, f"bad frame count {line[2:]!r}") from None
    if count < 1:
        raise ParseError(lineno, f"frame count must be >= 1, got {count}")
    return count


def store_matrix(matrix: ConfidenceMatrix, path: str | Path, binary: bool = False) -> None:
    """Write a matrix; text values use shortest round-trip formatting."""
    header = (
        f"{BINARY_MAGIC if binary else TEXT_MAGIC}\n"
        f"{_format_alphabet(matrix.alphabet)}\n"
        f"T={matrix.num_frames}\n"
    )
    if binary:
        with open(path, "wb") as fh:
            fh.write(header.encode("utf-8"))
            fh.write(matrix.probs.astype("<f4").tobytes())
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(header)
            for row in matrix.probs:
                fh.write("\t".join(repr(float(v)) for v in row) + "\n")


def load_matrix(path: str | Path, alphabet: Alphabet | None = None) -> ConfidenceMatrix:
    """Read a matrix in either format.

    When ``alphabet`` is given, its symbols must match the file's and it
    is used as-is (keeping its normalization map and separator); otherwise
    the alphabet is reconstructed from the file, with a space symbol, if
    present, taken as the separator. Row sums follow the load policy:
    small deviations are renormalized with a warning, large ones raise.
    """
    with open(path, "rb") as fh:
        magic = fh.readline().decode("utf-8", errors="replace").rstrip("\n")
        if magic not in (TEXT_MAGIC, BINARY_MAGIC):
            raise ParseError(1, f"bad magic {magic!r}")
        alpha_line = fh.readline().decode("utf-8").rstrip("\n")
        file_alphabet = _parse_alphabet(alpha_line, 2)
        n_frames = _parse_frame_count(fh.readline().decode("utf-8").rstrip("\n"), 3)
        n_symbols = len(file_alphabet)

        if alphabet is not None:
            if alphabet.symbols != file_alphabet.symbols:
                raise ParseError(2, "file alphabet does not match the expected alphabet")
        else:
            alphabet = file_alphabet

        if magic == BINARY_MAGIC:
            payload = fh.read()
            expected = n_frames * n_symbols * 4
            if len(payload) != expected:
                raise ParseError(4, f"expected {expected} payload bytes, got {len(payload)}")
            rows = np.frombuffer(payload, dtype="<f4").reshape(n_frames, n_symbols)
            return ConfidenceMatrix.from_rows(rows.astype(np.float64), alphabet)

        rows = np.empty((n_frames, n_symbols))
        for t in range(n_frames):
            lineno = 4 + t
            raw = fh.readline().decode("utf-8")
            if not raw:
                raise ParseError(lineno, f"expected {n_frames} rows, file ends at row {t}")
            parts = raw.rstrip("\n").split("\t")
            if len(parts) != n_symbols:
                raise ParseError(lineno, f"expected {n_symbols} values, got {len(parts)}")
            try:
                rows[t] = [float(p) for p in parts]
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from None
        if fh.readline().strip():
            raise ParseError(4 + n_frames, "trailing content after the last row")
        return ConfidenceMatrix.from_rows(rows, alphabet)
