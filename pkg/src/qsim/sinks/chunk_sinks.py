import hashlib
import logging
import sys
from typing import List, Optional, Sequence

import numpy as np

from ..formats.chunk_format import ChunkFormat, write_chunk
from ..interfaces.chunk_sink import ChunkSink
from ..interfaces.quantum_types import StateChunk

logger = logging.getLogger(__name__)

PARTIAL_SUFFIX = ".partial"


class FileChunkSink(ChunkSink):
    """Writes chunks to a path (or stdout when path is None)."""

    def __init__(self, path: Optional[str], fmt: ChunkFormat = ChunkFormat.TEXT, append: bool = False):
        self.path = path
        self.fmt = ChunkFormat(fmt)
        binary = self.fmt is ChunkFormat.BINARY
        if path is None:
            self._stream = sys.stdout.buffer if binary else sys.stdout
            self._owns = False
        else:
            mode = ("a" if append else "w") + ("b" if binary else "")
            self._stream = open(path, mode, **({} if binary else {"encoding": "utf-8"}))
            self._owns = True

    def accept(self, chunk: StateChunk) -> None:
        write_chunk(chunk, self.fmt, self._stream)

    def abort(self, completed_until: int) -> None:
        if self.path is None:
            return
        marker = self.path + PARTIAL_SUFFIX
        try:
            with open(marker, "w", encoding="utf-8") as f:
                f.write(f"partial output: indices below {completed_until} were written\n")
        except OSError as e:
            logger.error("Could not write partial-output marker %s: %s", marker, e)

    def close(self) -> None:
        if self._owns and not self._stream.closed:
            self._stream.close()
        elif not self._owns:
            self._stream.flush()


class CollectingSink(ChunkSink):
    """Keeps every chunk in memory; for small runs and tests."""

    def __init__(self):
        self.chunks: List[StateChunk] = []

    def accept(self, chunk: StateChunk) -> None:
        self.chunks.append(chunk)

    def amplitudes(self) -> np.ndarray:
        if not self.chunks:
            return np.zeros(0, dtype=np.complex128)
        return np.concatenate([c.amps for c in self.chunks])


class HashingSink(ChunkSink):
    """SHA-256 over the little-endian amplitude stream, independent of chunking."""

    def __init__(self):
        self._hash = hashlib.sha256()
        self.count = 0

    def accept(self, chunk: StateChunk) -> None:
        self._hash.update(chunk.amps.astype("<c16").tobytes())
        self.count += len(chunk)

    def hexdigest(self) -> str:
        return self._hash.hexdigest()


class TeeSink(ChunkSink):
    def __init__(self, sinks: Sequence[ChunkSink]):
        self.sinks = list(sinks)

    def accept(self, chunk: StateChunk) -> None:
        for sink in self.sinks:
            sink.accept(chunk)

    def abort(self, completed_until: int) -> None:
        for sink in self.sinks:
            sink.abort(completed_until)

    def close(self) -> None:
        for sink in self.sinks:
            sink.close()
