"""Brute-force dense reference, built only from 2x2 blocks and np.kron.

Kronecker order is q_M ⊗ ... ⊗ q_1: the LAST factor owns address bit 1 (the
LSB). Getting this backwards is silent, every test would still be unitary.

Nothing here calls qsim.core address math.
"""
from functools import reduce
from typing import List

import numpy as np
from numpy.typing import NDArray

from ..errors import CapacityError
from ..interfaces.quantum_types import Circuit, GateKind, GateStep, InputState, SparseUnitary

DENSE_MAX_QUBITS = 10

DenseMatrix = NDArray[np.complex128]

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
P1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)


def _check_dense_cap(num_qubits: int) -> None:
    if num_qubits > DENSE_MAX_QUBITS:
        raise CapacityError(num_qubits, DENSE_MAX_QUBITS, what="dense matrix")


def _embed(num_qubits: int, ops: dict) -> DenseMatrix:
    """Kronecker product with ops[j] at bit j (1-based) and identity elsewhere."""
    factors: List[np.ndarray] = [ops.get(j, I2) for j in range(num_qubits, 0, -1)]
    return reduce(np.kron, factors)


def dense_step(step: GateStep, num_qubits: int) -> DenseMatrix:
    _check_dense_cap(num_qubits)
    step.validate(num_qubits)
    identity = np.eye(1 << num_qubits, dtype=np.complex128)
    if step.kind is GateKind.SWAP:
        a, b = step.swap_pair
        return (identity + _embed(num_qubits, {a: X, b: X}) + _embed(num_qubits, {a: Y, b: Y})
                + _embed(num_qubits, {a: Z, b: Z})) / 2
    projector = _embed(num_qubits, {c: P1 for c in step.controls})
    if step.kind is GateKind.BITFLIP:
        flip = _embed(num_qubits, {**{c: P1 for c in step.controls}, step.target: X})
        return identity - projector + flip
    return identity + (np.exp(1j * step.theta) - 1) * projector


def dense_circuit(circuit: Circuit) -> DenseMatrix:
    """U_n ... U_1."""
    _check_dense_cap(circuit.num_qubits)
    u = np.eye(circuit.dim, dtype=np.complex128)
    for step in circuit.steps:
        u = dense_step(step, circuit.num_qubits) @ u
    return u


def dense_input(state: InputState) -> NDArray[np.complex128]:
    _check_dense_cap(state.num_qubits)
    pairs = [np.array([q.amp0, q.amp1], dtype=np.complex128) for q in reversed(state.qubits)]
    return reduce(np.kron, pairs)


def dense_expand(u: SparseUnitary) -> DenseMatrix:
    if u.dim > (1 << DENSE_MAX_QUBITS):
        raise CapacityError(int(u.dim).bit_length() - 1, DENSE_MAX_QUBITS, what="dense matrix")
    dense = np.zeros((u.dim, u.dim), dtype=np.complex128)
    dense[np.arange(u.dim), u.col] = u.val
    return dense
