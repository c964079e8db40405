"""Seeded benchmark circuits.

Gate mix: 80% BITFLIP with 0-2 controls, 10% SWAP, 10% CPHASE with theta
uniform in [0, 2pi). Circuits depend only on (seed, M, steps).
"""
import math

import numpy as np

from ..interfaces.quantum_types import Circuit, GateStep, InputState, QubitPair

BITFLIP_SHARE = 0.8
SWAP_SHARE = 0.1


def random_circuit(num_qubits: int, steps: int, seed: int = 0) -> Circuit:
    rng = np.random.default_rng([seed, num_qubits])
    bits = np.arange(1, num_qubits + 1)
    gates = []
    for _ in range(steps):
        roll = rng.random()
        if num_qubits >= 2 and BITFLIP_SHARE <= roll < BITFLIP_SHARE + SWAP_SHARE:
            a, b = rng.choice(bits, size=2, replace=False)
            gates.append(GateStep.swap(int(a), int(b)))
        elif roll >= BITFLIP_SHARE + SWAP_SHARE:
            n_controls = int(rng.integers(1, min(2, num_qubits) + 1))
            controls = rng.choice(bits, size=n_controls, replace=False)
            gates.append(GateStep.cphase(float(rng.uniform(0, 2 * math.pi)), [int(c) for c in controls]))
        else:
            n_controls = int(rng.integers(0, min(2, num_qubits - 1) + 1))
            chosen = rng.choice(bits, size=n_controls + 1, replace=False)
            gates.append(GateStep.bitflip(int(chosen[0]), [int(c) for c in chosen[1:]]))
    return Circuit(num_qubits, tuple(gates))


def random_input(num_qubits: int, seed: int = 0, normalized: bool = True) -> InputState:
    """Random complex product state, one pair per qubit."""
    rng = np.random.default_rng([seed, num_qubits, 1])
    pairs = []
    for _ in range(num_qubits):
        a = complex(rng.normal(), rng.normal())
        b = complex(rng.normal(), rng.normal())
        if normalized:
            n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
            a, b = a / n, b / n
        pairs.append(QubitPair(a, b))
    return InputState(tuple(pairs))
