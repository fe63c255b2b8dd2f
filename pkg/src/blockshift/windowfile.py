"""The BLOCKSHIFT/1 window file: a versioned text header, one ASCII
character per cell ('*' for undefined), and a trailing checksum.

The payload is chunked into 65536-character lines for inspectability.
The checksum is sha256 of the payload characters truncated to 64 bits
("sha256-64"), written as 16 hex digits; it is verified on load.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .errors import ChecksumError, InconsistencyError, VersionError
from .words import Alphabet, PartialWindow

FORMAT_TAG = "BLOCKSHIFT/1"
LINE_CELLS = 1 << 16

_HEADER_KEYS = ("alphabet", "profile", "depth", "m-list", "sparse", "u",
                "fill", "seed", "offset", "length")


def checksum64(payload: str) -> str:
    return hashlib.sha256(payload.encode("ascii")).hexdigest()[:16]


@dataclass(frozen=True)
class WindowFile:
    window: PartialWindow
    alphabet: Alphabet
    profile: str
    depth: int
    m_list: tuple[int, ...]
    sparse: str
    u: str
    fill: str
    seed: int

    def render(self) -> str:
        payload = self.window.to_text(self.alphabet)
        lines = [
            FORMAT_TAG,
            f"alphabet: {self.alphabet.symbols}",
            f"profile: {self.profile}",
            f"depth: {self.depth}",
            "m-list: " + ",".join(str(m) for m in self.m_list),
            f"sparse: {self.sparse}",
            f"u: {self.u}",
            f"fill: {self.fill}",
            f"seed: {self.seed}",
            f"offset: {self.window.start}",
            f"length: {len(self.window)}",
            "cells:",
        ]
        lines.extend(payload[i:i + LINE_CELLS] for i in range(0, len(payload), LINE_CELLS))
        lines.append(f"checksum: {checksum64(payload)}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_bytes(self.render().encode("ascii"))


def save_window(path, window: PartialWindow, *, alphabet: Alphabet, profile: str,
                depth: int, m_list, sparse: str, u: str, fill: str,
                seed: int = 0) -> WindowFile:
    wf = WindowFile(window, alphabet, profile, int(depth),
                    tuple(int(m) for m in m_list), sparse, u, fill, int(seed))
    wf.save(path)
    return wf


def load_window(path) -> WindowFile:
    text = Path(path).read_text(encoding="ascii")
    lines = text.split("\n")
    if not lines or lines[0] != FORMAT_TAG:
        raise VersionError(
            f"unsupported format tag {lines[0]!r} (expected {FORMAT_TAG})"
        )
    fields: dict[str, str] = {}
    i = 1
    while i < len(lines):
        line = lines[i]
        if line == "cells:":
            break
        if ": " not in line:
            raise InconsistencyError(f"malformed header line {line!r}")
        key, value = line.split(": ", 1)
        if key not in _HEADER_KEYS:
            raise InconsistencyError(f"unknown header key {key!r}")
        if key in fields:
            raise InconsistencyError(f"duplicate header key {key!r}")
        fields[key] = value
        i += 1
    else:
        raise InconsistencyError("missing 'cells:' section")
    missing = [k for k in _HEADER_KEYS if k not in fields]
    if missing:
        raise InconsistencyError(f"missing header keys: {', '.join(missing)}")

    payload_lines = []
    checksum = None
    for j in range(i + 1, len(lines)):
        line = lines[j]
        if line.startswith("checksum: "):
            checksum = line.split(": ", 1)[1]
            trailing = [t for t in lines[j + 1:] if t]
            if trailing:
                raise InconsistencyError("content after the checksum line")
            break
        payload_lines.append(line)
    if checksum is None:
        raise InconsistencyError("missing checksum line")
    payload = "".join(payload_lines)

    length = int(fields["length"])
    if len(payload) != length:
        raise InconsistencyError(
            f"declared length {length} != payload cell count {len(payload)}"
        )
    if checksum != checksum64(payload):
        raise ChecksumError(
            f"checksum mismatch: header {checksum}, payload {checksum64(payload)}"
        )
    alphabet = Alphabet(fields["alphabet"])
    allowed = set(alphabet.symbols) | {"*"}
    bad = next((ch for ch in payload if ch not in allowed), None)
    if bad is not None:
        raise InconsistencyError(f"payload character {bad!r} outside alphabet")
    window = PartialWindow.from_text(payload, alphabet, offset=int(fields["offset"]))
    m_list = tuple(int(v) for v in fields["m-list"].split(","))
    depth = int(fields["depth"])
    if len(m_list) != depth + 1:
        raise InconsistencyError("m-list length does not match depth")
    return WindowFile(window, alphabet, fields["profile"], depth, m_list,
                      fields["sparse"], fields["u"], fields["fill"],
                      int(fields["seed"]))
