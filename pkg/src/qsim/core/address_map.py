"""Address semantics of a single step and of a whole circuit.

A step matrix row i has its only nonzero at col(i) with value val(i), so that
output(i) = val(i) * input(col(i)). Every supported step is either an
involutive permutation (BITFLIP, SWAP) or diagonal (CPHASE), so col(i) is the
forward image of i. Evaluating a circuit row threads the output address
backward from the last step to the first.

map_output_address evaluates a one-element block, so a row computed alone
equals the same row of any block or explicit matrix exactly.
"""
import logging
from typing import Tuple

import numpy as np

from ..interfaces.quantum_types import Address, Circuit, GateKind, GateStep, check_address

logger = logging.getLogger(__name__)

_ONE = np.uint64(1)


def apply_step_to_address(step: GateStep, address: Address) -> Tuple[Address, complex]:
    if step.kind is GateKind.BITFLIP:
        cm = step.control_mask
        if address & cm == cm:
            return address ^ step.target_mask, 1 + 0j
        return address, 1 + 0j
    if step.kind is GateKind.CPHASE:
        cm = step.control_mask
        if address & cm == cm:
            return address, step.phase
        return address, 1 + 0j
    a, b = step.swap_pair
    if ((address >> (a - 1)) ^ (address >> (b - 1))) & 1:
        address ^= (1 << (a - 1)) | (1 << (b - 1))
    return address, 1 + 0j


def map_output_address(circuit: Circuit, address: Address) -> Tuple[Address, complex]:
    """Return (j, phi) with output(address) = phi * input(j). O(steps), no storage."""
    check_address(address, circuit.num_qubits)
    idx, phase = map_output_block(circuit, np.array([address], dtype=np.uint64))
    return int(idx[0]), complex(phase[0])


def apply_step_to_block(step: GateStep, idx: np.ndarray, phase: np.ndarray) -> None:
    """In-place block form of apply_step_to_address over uint64 `idx`."""
    if step.kind is GateKind.SWAP:
        a, b = (np.uint64(bit - 1) for bit in step.swap_pair)
        differ = ((idx >> a) ^ (idx >> b)) & _ONE
        both = np.uint64((1 << int(a)) | (1 << int(b)))
        np.bitwise_xor(idx, both, out=idx, where=differ.astype(bool))
        return

    cm = np.uint64(step.control_mask)
    selected = (idx & cm) == cm
    if step.kind is GateKind.BITFLIP:
        np.bitwise_xor(idx, np.uint64(step.target_mask), out=idx, where=selected)
    elif step.phase != 1:
        np.multiply(phase, step.phase, out=phase, where=selected)


def map_output_block(circuit: Circuit, indices: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized map_output_address over an array of output addresses."""
    idx = np.array(indices, dtype=np.uint64, copy=True)
    phase = np.ones(idx.shape, dtype=np.complex128)
    for step in reversed(circuit.steps):
        apply_step_to_block(step, idx, phase)
    return idx, phase
