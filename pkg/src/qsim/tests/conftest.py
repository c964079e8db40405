import numpy as np
import pytest

from qsim.interfaces.quantum_types import Circuit, GateStep, InputState, QubitPair
from qsim.formats.circuit_format import parse_circuit
from importlib.resources import files


def random_gate(rng: np.random.Generator, num_qubits: int) -> GateStep:
    bits = np.arange(1, num_qubits + 1)
    kind = rng.integers(0, 3) if num_qubits >= 2 else rng.choice([0, 2])
    if kind == 1:
        a, b = rng.choice(bits, size=2, replace=False)
        return GateStep.swap(int(a), int(b))
    if kind == 2:
        n = int(rng.integers(1, num_qubits + 1))
        controls = [int(c) for c in rng.choice(bits, size=n, replace=False)]
        theta = float(rng.choice([np.pi, np.pi / 2, rng.uniform(-4, 4)]))
        return GateStep.cphase(theta, controls)
    n = int(rng.integers(0, num_qubits))
    chosen = [int(c) for c in rng.choice(bits, size=n + 1, replace=False)]
    return GateStep.bitflip(chosen[0], chosen[1:])


def make_random_circuit(rng: np.random.Generator, num_qubits: int, steps: int) -> Circuit:
    return Circuit(num_qubits, tuple(random_gate(rng, num_qubits) for _ in range(steps)))


def make_random_state(rng: np.random.Generator, num_qubits: int) -> InputState:
    return InputState(tuple(
        QubitPair(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
        for _ in range(num_qubits)
    ))


def load_resource(name: str):
    return parse_circuit(files("qsim.resources").joinpath(name).read_text(encoding="utf-8"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# The displayed 4x4 signed permutation: output(i) = val[i] * input(col[i])
PAPER_COL = [3, 0, 2, 1]
PAPER_VAL = [1, 1, 1, -1]
