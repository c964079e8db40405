import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ..errors import ChunkOrderError
from ..interfaces.chunk_sink import ChunkSink
from ..interfaces.quantum_types import StateChunk

logger = logging.getLogger(__name__)

DEFAULT_TOP_K = 16


@dataclass
class ProbabilityReport:
    num_qubits: int
    range_start: int
    range_end: int
    total_norm2: float
    top: List[Tuple[int, float]] = field(default_factory=list)
    # marginals[j - 1] = P(a(j) = 1) over the covered range
    marginals: List[float] = field(default_factory=list)


class ProbabilityAccumulator(ChunkSink):
    """Streams chunks into totals, top-k and per-qubit marginals.

    Memory beyond the accumulators is one chunk. Chunks must arrive ascending
    and contiguous.
    """

    def __init__(self, num_qubits: int, k: int = DEFAULT_TOP_K):
        self.num_qubits = num_qubits
        self.k = k
        self.range_start: Optional[int] = None
        self.next_start: Optional[int] = None
        self.total = 0.0
        self.ones = np.zeros(num_qubits, dtype=np.float64)
        self.top: List[Tuple[int, float]] = []

    def accept(self, chunk: StateChunk) -> None:
        if len(chunk) == 0:
            return
        if self.next_start is None:
            self.range_start = chunk.start
        elif chunk.start < self.next_start:
            raise ChunkOrderError(
                f"chunk at {chunk.start} overlaps or precedes covered range ending at {self.next_start}")
        elif chunk.start > self.next_start:
            raise ChunkOrderError(f"gap between {self.next_start} and chunk at {chunk.start}")
        self.next_start = chunk.end

        probs = np.abs(chunk.amps) ** 2
        idx = chunk.indices()
        self.total += float(probs.sum())
        for j in range(self.num_qubits):
            bit = ((idx >> np.uint64(j)) & np.uint64(1)).astype(bool)
            self.ones[j] += float(probs[bit].sum())

        # highest probability first, lower index on ties
        order = np.lexsort((idx, -probs))[: self.k]
        candidates = self.top + [(int(idx[o]), float(probs[o])) for o in order]
        candidates.sort(key=lambda t: (-t[1], t[0]))
        self.top = candidates[: self.k]

    def report(self) -> ProbabilityReport:
        return ProbabilityReport(
            num_qubits=self.num_qubits,
            range_start=self.range_start or 0,
            range_end=self.next_start or 0,
            total_norm2=self.total,
            top=list(self.top),
            marginals=[float(p) for p in self.ones],
        )


def probabilities(chunks: Iterable[StateChunk], num_qubits: int, k: int = DEFAULT_TOP_K) -> ProbabilityReport:
    acc = ProbabilityAccumulator(num_qubits, k)
    for chunk in chunks:
        acc.accept(chunk)
    return acc.report()


def format_report(report: ProbabilityReport, style: str = "text") -> str:
    if style == "kv":
        lines = [
            f"range_start={report.range_start}",
            f"range_end={report.range_end}",
            f"total_norm2={report.total_norm2:.17g}",
        ]
        lines += [f"top.{n}={i}:{p:.17g}" for n, (i, p) in enumerate(report.top)]
        lines += [f"marginal.{j}={p:.17g}" for j, p in enumerate(report.marginals, start=1)]
        return "\n".join(lines)

    width = max(report.num_qubits, 1)
    lines = [
        f"Covered range: [{report.range_start}, {report.range_end})",
        f"Total probability: {report.total_norm2:.12g}",
        f"Top {len(report.top)} basis states:",
    ]
    lines += [f"  {i:>{width + 2}d}  |{i:0{width}b}>  {p:.12g}" for i, p in report.top]
    lines.append("Marginals P(a(j)=1):")
    lines += [f"  a({j}) = {p:.12g}" for j, p in enumerate(report.marginals, start=1)]
    return "\n".join(lines)
