"""Alphabets, words, and centered-block index arithmetic.

Coordinates are plain Python integers; windows are dense one-byte-per-cell
arrays, which caps practical window length near 2**31 cells.  Undefined
cells hold the STAR sentinel, which is distinct from every symbol index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, InvalidParameterError

STAR = 255
MAX_WINDOW_CELLS = 2**31

_FORBIDDEN_SYMBOLS = set("*# \t\r\n")


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct printable ASCII symbols; symbols[0] is the zero symbol."""

    symbols: str

    def __post_init__(self):
        if len(self.symbols) < 2:
            raise InvalidParameterError("alphabet needs at least 2 symbols")
        if len(set(self.symbols)) != len(self.symbols):
            raise InvalidParameterError("alphabet symbols must be distinct")
        for ch in self.symbols:
            if ord(ch) >= 128 or not ch.isprintable() or ch in _FORBIDDEN_SYMBOLS:
                raise InvalidParameterError(f"bad alphabet symbol {ch!r}")
        if len(self.symbols) >= STAR:
            raise InvalidParameterError("alphabet too large for the cell encoding")
        encode = np.full(128, -1, dtype=np.int16)
        decode = np.full(256, -1, dtype=np.int16)
        for i, ch in enumerate(self.symbols):
            encode[ord(ch)] = i
            decode[i] = ord(ch)
        encode[ord("*")] = STAR
        decode[STAR] = ord("*")
        object.__setattr__(self, "_encode", encode)
        object.__setattr__(self, "_decode", decode)

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def zero(self) -> str:
        return self.symbols[0]

    def index(self, ch: str) -> int:
        i = self.symbols.find(ch)
        if i < 0:
            raise InvalidParameterError(f"symbol {ch!r} not in alphabet {self.symbols!r}")
        return i

    def cells_of_text(self, text: str) -> bytes:
        """Translate a text into symbol indices; '*' becomes STAR."""
        try:
            raw = np.frombuffer(text.encode("ascii"), dtype=np.uint8)
        except UnicodeEncodeError as exc:
            raise InvalidParameterError(f"non-ASCII character in text: {exc}") from None
        cells = self._encode[raw]
        if cells.size and bool((cells < 0).any()):
            pos = int((cells < 0).argmax())
            raise InvalidParameterError(
                f"symbol {text[pos]!r} not in alphabet {self.symbols!r}"
            )
        return cells.astype(np.uint8).tobytes()

    def text_of_cells(self, cells) -> str:
        if isinstance(cells, (bytes, bytearray)):
            arr = np.frombuffer(cells, dtype=np.uint8)
        else:
            arr = np.ascontiguousarray(cells, dtype=np.uint8)
        chars = self._decode[arr]
        if chars.size and bool((chars < 0).any()):
            pos = int((chars < 0).argmax())
            raise InvalidParameterError(f"cell value {int(arr[pos])} outside alphabet")
        return chars.astype(np.uint8).tobytes().decode("ascii")


@dataclass(frozen=True)
class Word:
    """A finite string of symbol indices, stored as bytes."""

    cells: bytes

    def __post_init__(self):
        if len(self.cells) == 0:
            raise InvalidParameterError("empty word")
        if STAR in self.cells:
            raise InvalidParameterError("words may not contain the STAR sentinel")

    def __len__(self) -> int:
        return len(self.cells)

    @classmethod
    def from_text(cls, text: str, alphabet: Alphabet) -> "Word":
        cells = alphabet.cells_of_text(text)
        if STAR in cells:
            raise InvalidParameterError("words may not contain '*'")
        return cls(cells)

    def text(self, alphabet: Alphabet) -> str:
        return alphabet.text_of_cells(self.cells)

    def validate(self, alphabet: Alphabet) -> "Word":
        if any(c >= alphabet.size for c in self.cells):
            raise InvalidParameterError("word cell index outside alphabet")
        return self


class PartialWindow:
    """An integer-indexed window of symbol indices or STAR.

    Coordinate c lives at cells[c - offset].  Instances are immutable;
    operations that change cells return fresh windows.
    """

    __slots__ = ("offset", "cells")

    def __init__(self, offset: int, cells):
        arr = np.ascontiguousarray(cells, dtype=np.uint8)
        if arr.ndim != 1 or arr.size < 1:
            raise InvalidParameterError("window needs at least one cell")
        if arr.size > MAX_WINDOW_CELLS:
            raise InvalidParameterError(
                f"window of {arr.size} cells exceeds the {MAX_WINDOW_CELLS}-cell limit"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "offset", int(offset))
        object.__setattr__(self, "cells", arr)

    def __setattr__(self, name, value):
        raise AttributeError("PartialWindow is immutable")

    @classmethod
    def stars(cls, offset: int, length: int) -> "PartialWindow":
        if length < 1:
            raise InvalidParameterError("window length must be positive")
        return cls(offset, np.full(length, STAR, dtype=np.uint8))

    @classmethod
    def from_word(cls, word: Word, offset: int = 0) -> "PartialWindow":
        return cls(offset, np.frombuffer(word.cells, dtype=np.uint8))

    @classmethod
    def from_text(cls, text: str, alphabet: Alphabet, offset: int = 0) -> "PartialWindow":
        return cls(offset, np.frombuffer(alphabet.cells_of_text(text), dtype=np.uint8))

    def __len__(self) -> int:
        return int(self.cells.size)

    @property
    def start(self) -> int:
        return self.offset

    @property
    def end(self) -> int:
        """Inclusive right endpoint."""
        return self.offset + len(self) - 1

    def interval(self) -> tuple[int, int]:
        return (self.start, self.end)

    def __getitem__(self, coord: int) -> int:
        if not (self.start <= coord <= self.end):
            raise InvalidParameterError(f"coordinate {coord} outside window {self.interval()}")
        return int(self.cells[coord - self.offset])

    def sub(self, lo: int, hi: int) -> "PartialWindow":
        """Restriction to the inclusive coordinate interval [lo, hi]."""
        if lo > hi or lo < self.start or hi > self.end:
            raise InvalidParameterError(f"[{lo},{hi}] not inside window {self.interval()}")
        return PartialWindow(lo, self.cells[lo - self.offset : hi - self.offset + 1])

    def is_fully_defined(self) -> bool:
        return not bool((self.cells == STAR).any())

    def star_count(self) -> int:
        return int((self.cells == STAR).sum())

    def to_word(self) -> Word:
        if not self.is_fully_defined():
            raise InvalidParameterError("window contains '*' cells")
        return Word(self.cells.tobytes())

    def to_text(self, alphabet: Alphabet) -> str:
        return alphabet.text_of_cells(self.cells)

    def with_cells(self, cells) -> "PartialWindow":
        return PartialWindow(self.offset, cells)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialWindow)
            and self.offset == other.offset
            and len(self) == len(other)
            and bool((self.cells == other.cells).all())
        )

    def __repr__(self) -> str:
        return f"PartialWindow(offset={self.offset}, length={len(self)})"


def _check_block_length(m: int) -> int:
    if not isinstance(m, int) or m < 1 or m % 2 == 0:
        raise InvalidParameterError(f"block length must be an odd positive integer, got {m}")
    return m


def block_interval(i: int, m: int) -> tuple[int, int]:
    """Inclusive integer interval of the level block with index i and length m."""
    _check_block_length(m)
    h = (m - 1) // 2
    return (i * m - h, i * m + h)


def block_of(coord: int, m: int) -> int:
    """Index of the length-m block containing the coordinate."""
    _check_block_length(m)
    return (coord + (m - 1) // 2) // m


def blocks_meeting(lo: int, hi: int, m: int) -> tuple[int, int]:
    """Inclusive block-index range whose blocks intersect [lo, hi]."""
    if lo > hi:
        raise InvalidParameterError(f"empty interval [{lo},{hi}]")
    return (block_of(lo, m), block_of(hi, m))


def hull_of_blocks(lo: int, hi: int, m: int) -> tuple[int, int]:
    """Smallest union of length-m blocks covering [lo, hi], as an interval."""
    i_lo, i_hi = blocks_meeting(lo, hi, m)
    return (block_interval(i_lo, m)[0], block_interval(i_hi, m)[1])


def decompose_blocks(w: PartialWindow, m: int) -> list[tuple[int, PartialWindow]]:
    """Split a block-aligned window into its (index, sub-window) pieces."""
    _check_block_length(m)
    h = (m - 1) // 2
    if (w.start + h) % m != 0:
        raise AlignmentError(
            f"window start {w.start} is not a level-{m} block boundary "
            f"(expected i*{m} - {h})"
        )
    if len(w) % m != 0:
        raise AlignmentError(
            f"window end {w.end} is not a level-{m} block boundary "
            f"(length {len(w)} not a multiple of {m})"
        )
    i0 = (w.start + h) // m
    return [
        (i0 + t, w.sub(w.start + t * m, w.start + t * m + m - 1))
        for t in range(len(w) // m)
    ]


def occurrences(pattern: Word, text: PartialWindow) -> list[int]:
    """All coordinates where the fully defined pattern occurs; STAR never matches."""
    needle = pattern.cells
    hay = text.cells.tobytes()
    out = []
    pos = hay.find(needle)
    while pos != -1:
        out.append(text.offset + pos)
        pos = hay.find(needle, pos + 1)
    return out
