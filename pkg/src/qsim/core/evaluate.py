import numpy as np

from ..errors import AddressRangeError
from ..interfaces.quantum_types import Circuit, InputState, StateChunk
from .address_map import map_output_block
from .kron import kron_block


def check_range(num_qubits: int, start: int, length: int) -> None:
    if length < 1:
        raise AddressRangeError(f"chunk length must be >= 1, got {length}")
    if start < 0 or start + length > (1 << num_qubits):
        raise AddressRangeError(
            f"chunk [{start}, {start + length}) outside [0, 2^{num_qubits})")


def evaluate_chunk(circuit: Circuit, state: InputState, start: int, length: int) -> StateChunk:
    """Amplitudes of output indices [start, start + length), in index order.

    amps[k] = phi * kron_element(state, j) with (j, phi) the backward image of
    start + k. Extra memory is O(length + M).
    """
    if state.num_qubits != circuit.num_qubits:
        raise AddressRangeError(
            f"input has {state.num_qubits} qubits, circuit has {circuit.num_qubits}")
    check_range(circuit.num_qubits, start, length)
    rows = np.arange(start, start + length, dtype=np.uint64)
    src, phase = map_output_block(circuit, rows)
    del rows
    amps = kron_block(state, src)
    amps *= phase
    return StateChunk(start, amps)
