#!/usr/bin/env python3
"""
Chunked evaluation demo.

Evaluates a 1024-amplitude window of a 40-qubit circuit, far beyond what a
full state vector would allow, and prints the largest probabilities.

Usage:
    python -m qsim.examples.chunked_run_example
"""

from qsim.analysis.probabilities import ProbabilityAccumulator, format_report
from qsim.bench.workload import random_circuit, random_input
from qsim.executors.parallel_executor import AmplitudeLedger, ExecutionPlan, run_parallel


def main():
    circuit = random_circuit(40, steps=50, seed=7)
    state = random_input(40, seed=7)
    plan = ExecutionPlan.for_circuit(circuit, start=1 << 20, length=1024, chunk_size=256, workers=2)

    accumulator = ProbabilityAccumulator(circuit.num_qubits, k=5)
    ledger = AmplitudeLedger()
    report = run_parallel(circuit, state, plan, accumulator, backend="thread", ledger=ledger)

    print(f"Tasks: {report.tasks_completed}, elapsed {report.elapsed_seconds:.4f}s")
    print(f"Peak resident amplitudes: {report.peak_resident_amplitudes} "
          f"(bound {plan.workers * plan.chunk_size})")
    print(format_report(accumulator.report()))


if __name__ == "__main__":
    main()
