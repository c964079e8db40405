from abc import ABC, abstractmethod

from .quantum_types import StateChunk


class ChunkSink(ABC):
    """Receives state chunks in ascending start order from a single assembler."""

    @abstractmethod
    def accept(self, chunk: StateChunk) -> None:
        """Consume one chunk.

        Args:
            chunk: The next chunk; its start equals the previous chunk's end
        """
        pass

    def abort(self, completed_until: int) -> None:
        """Called once if the run stops early.

        Args:
            completed_until: Every index below this was delivered to `accept`
        """
        pass

    def close(self) -> None:
        """Release the underlying stream; called once when the run ends, also after `abort`."""
        pass

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()
        return False
