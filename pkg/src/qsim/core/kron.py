"""Input amplitudes generated on the fly from the per-qubit factorization.

Element i of q_M ⊗ ... ⊗ q_1 is the product of q_j(bit_j(i)) over j = 1..M,
so no state vector is ever stored.
"""
import numpy as np

from ..interfaces.quantum_types import Address, InputState, check_address


def kron_element(state: InputState, address: Address) -> complex:
    check_address(address, state.num_qubits)
    return complex(kron_block(state, np.array([address], dtype=np.uint64))[0])


def kron_block(state: InputState, indices: np.ndarray) -> np.ndarray:
    """Kronecker elements for a uint64 index array."""
    idx = np.asarray(indices, dtype=np.uint64)
    amps = np.ones(idx.shape, dtype=np.complex128)
    for j, q in enumerate(state.qubits):
        bit = ((idx >> np.uint64(j)) & np.uint64(1)).astype(bool)
        amps *= np.where(bit, q.amp1, q.amp0)
    return amps
