"""State-chunk output.

text:   one "<index> <re> <im>" line per amplitude, ascending from chunk.start
binary: per chunk, little-endian u64 start, u64 len, then len (re, im) f64 pairs
"""
import struct
from enum import Enum
from typing import BinaryIO, Iterator, List, TextIO, Union

import numpy as np

from ..errors import ChunkFormatError
from ..interfaces.quantum_types import StateChunk

_RECORD_HEADER = struct.Struct("<QQ")


class ChunkFormat(Enum):
    TEXT = "text"
    BINARY = "binary"


def write_chunk(chunk: StateChunk, fmt: Union[ChunkFormat, str], sink: Union[TextIO, BinaryIO]) -> None:
    fmt = ChunkFormat(fmt)
    if fmt is ChunkFormat.BINARY:
        sink.write(_RECORD_HEADER.pack(chunk.start, len(chunk)))
        sink.write(chunk.amps.astype("<c16").tobytes())
        return
    lines = [f"{i} {a.real:.17g} {a.imag:.17g}\n"
             for i, a in zip(range(chunk.start, chunk.end), chunk.amps.tolist())]
    sink.write("".join(lines))


def _read_text(source: TextIO) -> Iterator[StateChunk]:
    start = None
    expected = None
    amps: List[complex] = []
    for line_no, raw in enumerate(source, start=1):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 3:
            raise ChunkFormatError(f"line {line_no}: expected '<index> <re> <im>'")
        try:
            index = int(parts[0])
            amp = complex(float(parts[1]), float(parts[2]))
        except ValueError:
            raise ChunkFormatError(f"line {line_no}: malformed number") from None
        if expected is not None and index != expected:
            yield StateChunk(start, np.array(amps, dtype=np.complex128))
            start, amps = None, []
        if start is None:
            start = index
        amps.append(amp)
        expected = index + 1
    if start is not None:
        yield StateChunk(start, np.array(amps, dtype=np.complex128))


def _read_binary(source: BinaryIO) -> Iterator[StateChunk]:
    while True:
        header = source.read(_RECORD_HEADER.size)
        if not header:
            return
        if len(header) != _RECORD_HEADER.size:
            raise ChunkFormatError("truncated chunk record header")
        start, length = _RECORD_HEADER.unpack(header)
        payload = source.read(16 * length)
        if len(payload) != 16 * length:
            raise ChunkFormatError(f"truncated chunk payload at start={start}")
        yield StateChunk(start, np.frombuffer(payload, dtype="<c16").astype(np.complex128))


def read_chunks(source: Union[TextIO, BinaryIO], fmt: Union[ChunkFormat, str]) -> List[StateChunk]:
    """Read back chunks; contiguous text lines come back as one chunk."""
    if ChunkFormat(fmt) is ChunkFormat.BINARY:
        return list(_read_binary(source))
    return list(_read_text(source))
