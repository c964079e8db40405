import argparse
import logging
import sys
from datetime import datetime
from typing import List, Optional

from qsim.analysis.probabilities import DEFAULT_TOP_K, ProbabilityAccumulator, format_report
from qsim.analysis.verification import CheckResult, run_invariant_suite, verify_unitary
from qsim.bench.bench_runner import host_description, run_bench, write_bench_csv
from qsim.core.sparse import compose_explicit
from qsim.env_manager import BACKENDS, get_max_explicit_qubits, get_session_dir, load_env
from qsim.errors import (
    CapacityError, CircuitFormatError, ConfigError, QsimError, SinkError, SparseFormatError,
)
from qsim.executors.parallel_executor import AmplitudeLedger, ExecutionPlan, run_parallel
from qsim.formats.chunk_format import ChunkFormat
from qsim.formats.circuit_format import parse_circuit
from qsim.formats.sparse_format import load_sparse, save_sparse
from qsim.interfaces.run_session import RunStatus, SessionManager
from qsim.session.session_manager import FileSessionManager, InMemorySessionManager
from qsim.sinks.chunk_sinks import FileChunkSink, TeeSink

GREEN = "\033[92m"
RED = "\033[91m"
BLUE = "\033[94m"
RESET = "\033[0m"
try:
    import colorama
    colorama.init()
except Exception:
    pass

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_RUNTIME = 3

logger = logging.getLogger("qsim")


class UsageError(Exception):
    pass


class QsimArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; qsim reserves 2 for input errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{RED}{self.prog}: error: {message}{RESET}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def fail(message: str) -> None:
    print(f"{RED}{message}{RESET}", file=sys.stderr)


def read_circuit(path: str):
    with open(path, "r", encoding="utf-8") as f:
        return parse_circuit(f.read())


def print_checks(results: List[CheckResult]) -> bool:
    ok = True
    for r in results:
        if r.skipped:
            print(f"{BLUE}[skip] {r.name}: {r.detail}{RESET}")
        elif r.passed:
            print(f"{GREEN}[pass] {r.name}{': ' + r.detail if r.detail else ''}{RESET}")
        else:
            ok = False
            print(f"{RED}[FAIL] {r.name}: {r.detail}{RESET}")
    return ok


def get_session_manager(storage: str) -> SessionManager:
    if storage == "file":
        return FileSessionManager(get_session_dir())
    return InMemorySessionManager()


def cmd_run(args: argparse.Namespace) -> int:
    session_manager = get_session_manager(args.session_storage)
    append = False
    if args.resume:
        context = session_manager.load_session(args.resume)
        if context is None:
            raise UsageError(f"Session {args.resume} not found in {get_session_dir()}")
        if context.status is RunStatus.COMPLETED:
            print(f"{GREEN}Run {context.run_id} already completed.{RESET}")
            return EXIT_OK
        circuit_path, out_path, fmt = context.circuit_path, context.out_path, ChunkFormat(context.fmt)
        start, length, chunk_size = context.next_start, context.remaining, context.chunk_size
        append = True
    else:
        if not args.circuit:
            raise UsageError("--circuit is required (or --resume RUN_ID)")
        circuit_path, out_path, fmt = args.circuit, args.out, ChunkFormat(args.format)
        start, length, chunk_size = args.start, args.len, args.chunk_size
        context = None

    circuit, state = read_circuit(circuit_path)
    plan = ExecutionPlan.for_circuit(circuit, start=start, length=length,
                                     chunk_size=chunk_size, workers=args.workers)
    if context is None:
        context = session_manager.create_session(circuit_path, out_path, fmt.value,
                                                 plan.total_start, plan.total_end, plan.chunk_size)
        if args.session_storage == "file":
            print(f"{BLUE}Run id: {context.run_id}{RESET}", file=sys.stderr)
    context.status = RunStatus.IN_PROGRESS
    context.started_at = datetime.now()
    session_manager.save_session(context)

    def checkpoint(next_start: int) -> None:
        context.next_start = next_start
        session_manager.save_session(context)

    accumulator = ProbabilityAccumulator(circuit.num_qubits, args.top_k) if args.post else None
    file_sink = FileChunkSink(out_path, fmt, append=append)
    sink = TeeSink([file_sink, accumulator]) if accumulator else file_sink
    ledger = AmplitudeLedger()
    try:
        with sink:
            report = run_parallel(circuit, state, plan, sink, backend=args.backend,
                                  ledger=ledger, on_chunk=checkpoint)
    except KeyboardInterrupt:
        context.status = RunStatus.CANCELLED
        session_manager.save_session(context)
        raise
    except Exception:
        context.status = RunStatus.FAILED
        session_manager.save_session(context)
        raise

    context.status = RunStatus.COMPLETED
    context.completed_at = datetime.now()
    context.metadata["elapsed_seconds"] = report.elapsed_seconds
    context.metadata["peak_resident_amplitudes"] = report.peak_resident_amplitudes
    session_manager.save_session(context)
    logger.info("run: %d tasks in %.3fs, peak resident amplitudes %d",
                report.tasks_completed, report.elapsed_seconds, report.peak_resident_amplitudes)
    if accumulator is not None:
        print(format_report(accumulator.report(), args.report_format))
    return EXIT_OK


def cmd_compile(args: argparse.Namespace) -> int:
    circuit, _ = read_circuit(args.circuit)
    cap = args.max_qubits if args.max_qubits is not None else get_max_explicit_qubits()
    u = compose_explicit(circuit, max_qubits=cap)
    save_sparse(u, args.out, binary=args.binary)
    report = verify_unitary(u)
    colour = GREEN if report.is_unitary else RED
    print(f"{colour}rows={u.dim} unitary={report.is_unitary} "
          f"max_deviation={report.max_deviation:.3e} self_transpose={u.is_self_transpose()}{RESET}")
    for failure in report.failures:
        fail(f"  {failure}")
    return EXIT_OK if report.is_unitary else EXIT_RUNTIME


def cmd_verify(args: argparse.Namespace) -> int:
    if bool(args.circuit) == bool(args.sparse):
        raise UsageError("give exactly one of --circuit or --sparse")
    if args.sparse:
        u = load_sparse(args.sparse, check_bijective=False)
        report = verify_unitary(u)
        results = [
            CheckResult("bijectivity", report.bijective,
                        "" if report.bijective else "column map is not a bijection"),
            CheckResult("unit values", report.max_deviation <= 1e-12,
                        f"max ||v|-1| = {report.max_deviation:.3e}"),
        ]
    else:
        circuit, state = read_circuit(args.circuit)
        results = run_invariant_suite(circuit, state, against_dense=args.against_dense)
    return EXIT_OK if print_checks(results) else EXIT_RUNTIME


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        records = run_bench(args.min_qubits, args.max_qubits, args.steps, workers=args.workers,
                            repeats=args.repeats, seed=args.seed, chunk_size=args.chunk_size,
                            backend=args.backend)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as f:
            write_bench_csv(records, f)
    else:
        write_bench_csv(records, sys.stdout)
    for r in records:
        growth = "" if r.growth is None else f"  x{r.growth:.2f} per qubit"
        print(f"{BLUE}M={r.num_qubits:<3d} {r.elapsed_seconds:.6f}s{growth}{RESET}", file=sys.stderr)
    if args.record:
        from qsim.storage_builder import record_bench_runs
        n = record_bench_runs(records, host_description(), seed=args.seed)
        print(f"{GREEN}Recorded {n} bench rows.{RESET}", file=sys.stderr)
    return EXIT_OK


def cmd_sessions(args: argparse.Namespace) -> int:
    sessions = FileSessionManager(get_session_dir()).list_sessions()
    if not sessions:
        print(f"{BLUE}No sessions found.{RESET}")
        return EXIT_OK
    for s in sessions:
        colour = GREEN if s.status is RunStatus.COMPLETED else BLUE if s.status is RunStatus.IN_PROGRESS else RED
        print(f"{colour}  {s.run_id}: {s.circuit_path} [{s.status.value}] "
              f"{s.progress_percentage()}% next={s.next_start}{RESET}")
    return EXIT_OK


def get_help_message():
    return f"""
    {BLUE}Usage examples:{RESET}
    {GREEN}qsim run --circuit cnot.qc --out out.txt --post
    {GREEN}qsim run --circuit big.qc --start 1048576 --len 1024 --workers 8
    {GREEN}qsim compile --circuit cnot.qc --out cnot.sparse
    {GREEN}qsim verify --circuit cnot.qc --against-dense
    {GREEN}qsim bench --min-qubits 16 --max-qubits 22 --workers 4 --csv bench.csv{RESET}
    """


def _positive(text: str) -> int:
    value = int(text, 0)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative(text: str) -> int:
    value = int(text, 0)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = QsimArgumentParser(prog="qsim",
                                description="qsim evaluates phased-permutation quantum circuits "
                                            "chunk by chunk, without storing the state vector.",
                                formatter_class=argparse.RawTextHelpFormatter,
                                epilog=get_help_message())
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def execution_flags(p):
        p.add_argument("--chunk-size", type=_positive, default=None,
                       help="Amplitudes per task (default: QSIM_CHUNK_SIZE or 65536)")
        p.add_argument("--workers", type=_positive, default=None,
                       help="Parallel workers (default: QSIM_WORKERS or CPU count)")
        p.add_argument("--backend", choices=BACKENDS, default=None,
                       help="Worker pool type (default: QSIM_BACKEND or process)")

    run = sub.add_parser("run", help="Compute a range of the output state vector")
    run.add_argument("--circuit", type=str, help="Circuit file")
    run.add_argument("--start", type=_non_negative, default=0, help="First output index")
    run.add_argument("--len", type=_positive, default=None, help="Number of amplitudes (default: to the end)")
    execution_flags(run)
    run.add_argument("--out", type=str, default=None, help="Output file (default: stdout)")
    run.add_argument("--format", choices=[f.value for f in ChunkFormat], default="text")
    run.add_argument("--post", action="store_true", help="Append a probabilities report")
    run.add_argument("--top-k", type=_positive, default=DEFAULT_TOP_K)
    run.add_argument("--report-format", choices=["text", "kv"], default="text")
    run.add_argument("--session-storage", choices=["memory", "file"], default="memory",
                     help="Checkpoint progress to QSIM_SESSION_DIR (file) for --resume")
    run.add_argument("--resume", type=str, metavar="RUN_ID", help="Continue an interrupted run")
    run.set_defaults(handler=cmd_run)

    comp = sub.add_parser("compile", help="Write the explicit sparse unitary of a circuit")
    comp.add_argument("--circuit", type=str, required=True)
    comp.add_argument("--out", type=str, required=True)
    comp.add_argument("--max-qubits", type=_positive, default=None,
                      help="Override the explicit-matrix cap (default: QSIM_MAX_EXPLICIT_QUBITS or 26)")
    comp.add_argument("--binary", action="store_true", help="Binary sparse form")
    comp.set_defaults(handler=cmd_compile)

    ver = sub.add_parser("verify", help="Run the invariant suite")
    ver.add_argument("--circuit", type=str)
    ver.add_argument("--sparse", type=str, help="Verify a stored sparse matrix file instead")
    ver.add_argument("--against-dense", action="store_true", help="Compare with the dense oracle (M <= 10)")
    ver.set_defaults(handler=cmd_verify)

    bench = sub.add_parser("bench", help="Time seeded random circuits over a qubit sweep")
    bench.add_argument("--min-qubits", type=_positive, required=True)
    bench.add_argument("--max-qubits", type=_positive, required=True)
    bench.add_argument("--steps", type=_non_negative, default=50, help="Gates per circuit")
    execution_flags(bench)
    bench.add_argument("--repeats", type=_positive, default=1)
    bench.add_argument("--seed", type=_non_negative, default=0)
    bench.add_argument("--csv", type=str, default=None, help="CSV path (default: stdout)")
    bench.add_argument("--record", action="store_true", help="Store results in the bench database")
    bench.set_defaults(handler=cmd_bench)

    sessions = sub.add_parser("sessions", help="List checkpointed runs")
    sessions.set_defaults(handler=cmd_sessions)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    load_env()
    try:
        return args.handler(args)
    except UsageError as e:
        fail(str(e))
        return EXIT_USAGE
    except CircuitFormatError as e:
        fail(f"Circuit {e.kind}: {e}")
        return EXIT_INPUT
    except (SparseFormatError, CapacityError, ConfigError) as e:
        fail(f"{type(e).__name__}: {e}")
        return EXIT_INPUT
    except SinkError as e:
        fail(f"Output failed, partial output marker written: {e}")
        return EXIT_RUNTIME
    except QsimError as e:
        fail(f"{type(e).__name__}: {e}")
        return EXIT_INPUT if isinstance(e, ValueError) else EXIT_RUNTIME
    except FileNotFoundError as e:
        fail(f"Input not found: {e.filename}")
        return EXIT_INPUT
    except KeyboardInterrupt:
        fail("Interrupted")
        return EXIT_RUNTIME
    except Exception as e:
        logger.debug("unexpected failure", exc_info=True)
        fail(f"Unexpected error: {e}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    # process pools re-import this module in frozen builds
    from multiprocessing import freeze_support
    freeze_support()
    sys.exit(main())
