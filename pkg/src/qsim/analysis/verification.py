import logging
from dataclasses import dataclass, field
from typing import List, Union

import numpy as np

from ..core.evaluate import evaluate_chunk
from ..core.sparse import build_step_matrix, compose_explicit
from ..env_manager import get_max_explicit_qubits
from ..errors import CapacityError
from ..interfaces.quantum_types import UNIT_TOLERANCE, Circuit, InputState, SparseUnitary
from .dense_oracle import DENSE_MAX_QUBITS, DenseMatrix, dense_circuit, dense_input

logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-12
NORM_TOLERANCE = 1e-10
NORM_CHECK_MAX_QUBITS = 22


@dataclass
class UnitaryReport:
    is_unitary: bool
    max_deviation: float
    bijective: bool = True
    failures: List[str] = field(default_factory=list)


def verify_unitary(u: Union[SparseUnitary, DenseMatrix]) -> UnitaryReport:
    """U†U = I check. Sparse: exact bijectivity plus |val| = 1 within 1e-12.

    Dense: max |(U†U - I)_jk| is reported, dim <= 2^10.
    """
    if isinstance(u, SparseUnitary):
        failures = []
        in_range = u.dim == 0 or (u.col.min() >= 0 and u.col.max() < u.dim)
        bijective = bool(in_range and np.all(np.bincount(u.col, minlength=u.dim) == 1))
        if not bijective:
            failures.append("column map is not a bijection")
        deviation = float(np.max(np.abs(np.abs(u.val) - 1.0))) if u.dim else 0.0
        if deviation > UNIT_TOLERANCE:
            failures.append(f"non-unit value, max ||v|-1| = {deviation:.3e}")
        return UnitaryReport(not failures, deviation, bijective, failures)

    dense = np.asarray(u, dtype=np.complex128)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        return UnitaryReport(False, float("inf"), False, ["matrix is not square"])
    if dense.shape[0] > (1 << DENSE_MAX_QUBITS):
        raise CapacityError(dense.shape[0].bit_length() - 1, DENSE_MAX_QUBITS, what="dense matrix")
    gram = dense.conj().T @ dense
    deviation = float(np.max(np.abs(gram - np.eye(dense.shape[0])))) if dense.size else 0.0
    failures = [] if deviation <= ORACLE_TOLERANCE else [f"max |U†U - I| = {deviation:.3e}"]
    return UnitaryReport(not failures, deviation, failures=failures)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    skipped: bool = False


def _skip(name: str, why: str) -> CheckResult:
    return CheckResult(name, True, why, skipped=True)


def check_step_symmetry(circuit: Circuit) -> CheckResult:
    name = "step symmetry"
    if circuit.num_qubits > get_max_explicit_qubits():
        return _skip(name, "M over explicit cap")
    for n, step in enumerate(circuit.steps, start=1):
        if not step.is_involution():
            continue
        m = build_step_matrix(step, circuit.num_qubits)
        if not (m.is_self_transpose() and np.all(m.val == 1)):
            return CheckResult(name, False, f"step {n} is not its own transpose")
    return CheckResult(name, True)


def check_explicit(circuit: Circuit) -> List[CheckResult]:
    if circuit.num_qubits > get_max_explicit_qubits():
        return [_skip("bijectivity", "M over explicit cap"), _skip("unit values", "M over explicit cap")]
    u = compose_explicit(circuit)
    report = verify_unitary(u)
    results = [CheckResult("bijectivity", report.bijective,
                           "" if report.bijective else "column map is not a bijection")]
    unit_ok = report.max_deviation <= UNIT_TOLERANCE
    if unit_ok and not circuit.has_phases():
        unit_ok = bool(np.all(u.val == 1))
    results.append(CheckResult("unit values", unit_ok, f"max ||v|-1| = {report.max_deviation:.3e}"))
    return results


def check_norm(circuit: Circuit, state: InputState) -> CheckResult:
    name = "norm conservation"
    if circuit.num_qubits > NORM_CHECK_MAX_QUBITS:
        return _skip(name, f"M over {NORM_CHECK_MAX_QUBITS}")
    out = evaluate_chunk(circuit, state, 0, circuit.dim).amps
    got = float(np.linalg.norm(out))
    want = state.norm()
    diff = abs(got - want)
    return CheckResult(name, diff <= NORM_TOLERANCE, f"|out|={got:.17g} |in|={want:.17g}")


def check_against_dense(circuit: Circuit, state: InputState) -> CheckResult:
    name = "dense oracle"
    if circuit.num_qubits > DENSE_MAX_QUBITS:
        raise CapacityError(circuit.num_qubits, DENSE_MAX_QUBITS, what="dense oracle")
    expected = dense_circuit(circuit) @ dense_input(state)
    got = evaluate_chunk(circuit, state, 0, circuit.dim).amps
    err = float(np.max(np.abs(expected - got)))
    return CheckResult(name, err <= ORACLE_TOLERANCE, f"max-abs error {err:.3e}")


def run_invariant_suite(circuit: Circuit, state: InputState, against_dense: bool = False) -> List[CheckResult]:
    results = check_explicit(circuit)
    results.append(check_step_symmetry(circuit))
    results.append(check_norm(circuit, state))
    if against_dense:
        results.append(check_against_dense(circuit, state))
    for r in results:
        logger.debug("check %s: passed=%s skipped=%s %s", r.name, r.passed, r.skipped, r.detail)
    return results
