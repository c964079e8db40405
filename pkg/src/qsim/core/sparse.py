import logging
from typing import Optional

import numpy as np

from ..env_manager import get_max_explicit_qubits
from ..errors import CapacityError
from ..interfaces.quantum_types import Circuit, GateStep, SparseUnitary
from .address_map import map_output_block

logger = logging.getLogger(__name__)


def _check_cap(num_qubits: int, max_qubits: Optional[int]) -> None:
    cap = get_max_explicit_qubits() if max_qubits is None else max_qubits
    if num_qubits > cap:
        logger.info("Refusing explicit matrix: M=%d over cap %d", num_qubits, cap)
        raise CapacityError(num_qubits, cap)


def build_step_matrix(step: GateStep, num_qubits: int,
                      max_qubits: Optional[int] = None) -> SparseUnitary:
    """Explicit 2^M-row sparse matrix of one step."""
    return compose_explicit(Circuit(num_qubits, (step,)), max_qubits=max_qubits)


def compose_explicit(circuit: Circuit, max_qubits: Optional[int] = None) -> SparseUnitary:
    """Whole-circuit phased permutation, row i = map_output_address(circuit, i).

    Args:
        circuit: Circuit to materialize
        max_qubits: Cap override; defaults to QSIM_MAX_EXPLICIT_QUBITS (26)

    Returns:
        SparseUnitary with 2^M rows
    """
    _check_cap(circuit.num_qubits, max_qubits)
    rows = np.arange(circuit.dim, dtype=np.uint64)
    col, val = map_output_block(circuit, rows)
    return SparseUnitary(col.astype(np.int64), val)
