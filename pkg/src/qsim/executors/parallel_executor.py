import logging
import math
import threading
import time
from collections import deque
from concurrent.futures import Executor, Future, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Deque, Iterator, Optional, Tuple

from ..core.evaluate import check_range, evaluate_chunk
from ..env_manager import get_default_backend, get_default_chunk_size, get_default_workers
from ..errors import SinkError
from ..interfaces.chunk_sink import ChunkSink
from ..interfaces.quantum_types import Circuit, InputState, StateChunk

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExecutionPlan:
    """Output range [total_start, total_end) split into chunk_size tasks for W workers."""
    total_start: int
    total_end: int
    chunk_size: int
    workers: int = 1

    def __post_init__(self):
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.total_end <= self.total_start:
            raise ValueError(f"empty range [{self.total_start}, {self.total_end})")

    @classmethod
    def for_circuit(cls, circuit: Circuit, start: int = 0, length: Optional[int] = None,
                    chunk_size: Optional[int] = None, workers: Optional[int] = None) -> "ExecutionPlan":
        if length is None:
            length = circuit.dim - start
        check_range(circuit.num_qubits, start, length)
        return cls(
            total_start=start,
            total_end=start + length,
            chunk_size=chunk_size or get_default_chunk_size(),
            workers=workers or get_default_workers(),
        )

    @property
    def num_tasks(self) -> int:
        return math.ceil((self.total_end - self.total_start) / self.chunk_size)

    def tasks(self) -> Iterator[Tuple[int, int]]:
        """(start, length) per task; the last one may be short."""
        for start in range(self.total_start, self.total_end, self.chunk_size):
            yield start, min(self.chunk_size, self.total_end - start)


class AmplitudeLedger:
    """Counts amplitudes held by in-flight or undelivered tasks."""

    def __init__(self):
        self._lock = threading.Lock()
        self.resident = 0
        self.peak = 0

    def reserve(self, n: int) -> None:
        with self._lock:
            self.resident += n
            self.peak = max(self.peak, self.resident)

    def release(self, n: int) -> None:
        with self._lock:
            self.resident -= n


@dataclass
class RunReport:
    elapsed_seconds: float
    peak_resident_amplitudes: int
    tasks_completed: int
    completed_until: int


class _InlineExecutor(Executor):
    """W=1: evaluate on the calling thread."""

    def submit(self, fn, /, *args, **kwargs) -> Future:
        future = Future()
        try:
            future.set_result(fn(*args, **kwargs))
        except BaseException as e:
            future.set_exception(e)
        return future


class ChunkExecutor:
    """Fixed pool of W workers; chunks are released to the sink in ascending order.

    At most W tasks are outstanding at any time (submitted but not yet handed to
    the sink), so resident amplitude storage stays within W * chunk_size.
    """

    def __init__(self, workers: int = 1, backend: Optional[str] = None):
        self.workers = workers
        self.backend = backend or get_default_backend()

    def _make_pool(self) -> Executor:
        if self.workers == 1:
            return _InlineExecutor()
        if self.backend == "thread":
            return ThreadPoolExecutor(max_workers=self.workers)
        return ProcessPoolExecutor(max_workers=self.workers)

    def execute(self, circuit: Circuit, state: InputState, plan: ExecutionPlan, sink: ChunkSink,
                ledger: Optional[AmplitudeLedger] = None,
                on_chunk: Optional[Callable[[int], None]] = None) -> RunReport:
        ledger = ledger or AmplitudeLedger()
        logger.debug("Plan: [%d, %d) in %d tasks of %d, W=%d, backend=%s",
                     plan.total_start, plan.total_end, plan.num_tasks,
                     plan.chunk_size, self.workers, self.backend)
        began = time.perf_counter()
        pending: Deque[Tuple[int, int, Future]] = deque()
        tasks = plan.tasks()
        completed_until = plan.total_start
        done = 0

        with self._make_pool() as pool:
            def fill():
                while len(pending) < self.workers:
                    nxt = next(tasks, None)
                    if nxt is None:
                        return
                    start, length = nxt
                    ledger.reserve(length)
                    pending.append((start, length, pool.submit(evaluate_chunk, circuit, state, start, length)))

            fill()
            while pending:
                start, length, future = pending.popleft()
                chunk: StateChunk = future.result()
                try:
                    sink.accept(chunk)
                except Exception as e:
                    logger.error("Sink failed at chunk start=%d: %s", start, e)
                    for _, _, f in pending:
                        f.cancel()
                    sink.abort(completed_until)
                    raise SinkError(completed_until, e) from e
                ledger.release(length)
                completed_until = start + length
                done += 1
                logger.debug("Delivered [%d, %d)", start, completed_until)
                if on_chunk is not None:
                    on_chunk(completed_until)
                fill()

        return RunReport(
            elapsed_seconds=time.perf_counter() - began,
            peak_resident_amplitudes=ledger.peak,
            tasks_completed=done,
            completed_until=completed_until,
        )


def run_parallel(circuit: Circuit, state: InputState, plan: ExecutionPlan, sink: ChunkSink,
                 backend: Optional[str] = None, ledger: Optional[AmplitudeLedger] = None,
                 on_chunk: Optional[Callable[[int], None]] = None) -> RunReport:
    """Compute every index of plan's range exactly once and deliver it in order."""
    return ChunkExecutor(plan.workers, backend).execute(circuit, state, plan, sink, ledger, on_chunk)
