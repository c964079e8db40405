import csv
import logging
import platform
from dataclasses import dataclass
from typing import List, Optional, TextIO

from ..executors.parallel_executor import ExecutionPlan, run_parallel
from ..interfaces.quantum_types import InputState
from ..sinks.chunk_sinks import HashingSink
from .workload import random_circuit

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["M", "steps", "W", "chunk", "seconds", "growth", "output_hash"]


@dataclass
class BenchRecord:
    num_qubits: int
    steps: int
    workers: int
    chunk_size: int
    elapsed_seconds: float
    output_hash: str
    # seconds(M) / seconds(M-1) within one sweep; None for the first M
    growth: Optional[float] = None


def host_description() -> str:
    info = f"{platform.system()} {platform.release()} {platform.machine()}"
    if platform.system() == "Linux":
        try:
            import distro
            info += f" ({distro.name(pretty=True)})"
        except ImportError:
            pass
    return info


def run_bench(min_qubits: int, max_qubits: int, steps: int, workers: int = 1,
              repeats: int = 1, seed: int = 0, chunk_size: Optional[int] = None,
              backend: Optional[str] = None) -> List[BenchRecord]:
    """Time full-range execution of a seeded circuit for each M in the sweep.

    Only the execution phase is timed; the minimum over repeats is kept.
    """
    if min_qubits < 1 or max_qubits < min_qubits:
        raise ValueError(f"invalid qubit range [{min_qubits}, {max_qubits}]")
    if steps < 0 or repeats < 1:
        raise ValueError("steps must be >= 0 and repeats >= 1")

    records: List[BenchRecord] = []
    for m in range(min_qubits, max_qubits + 1):
        circuit = random_circuit(m, steps, seed)
        state = InputState.zeros(m)
        plan = ExecutionPlan.for_circuit(circuit, chunk_size=chunk_size, workers=workers)
        best = None
        digest = None
        for _ in range(repeats):
            sink = HashingSink()
            report = run_parallel(circuit, state, plan, sink, backend=backend)
            best = report.elapsed_seconds if best is None else min(best, report.elapsed_seconds)
            digest = sink.hexdigest()
        best = max(best, 1e-9)
        growth = best / records[-1].elapsed_seconds if records else None
        records.append(BenchRecord(m, steps, plan.workers, plan.chunk_size, best, digest, growth))
        logger.info("bench M=%d steps=%d W=%d: %.6fs growth=%s", m, steps, plan.workers, best, growth)
    return records


def write_bench_csv(records: List[BenchRecord], sink: TextIO) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            r.num_qubits, r.steps, r.workers, r.chunk_size, f"{r.elapsed_seconds:.9f}",
            "" if r.growth is None else f"{r.growth:.4f}", r.output_hash,
        ])
