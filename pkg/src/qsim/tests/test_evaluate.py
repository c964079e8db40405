import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsim.analysis.dense_oracle import dense_circuit, dense_input
from qsim.bench.workload import random_circuit, random_input
from qsim.core.evaluate import evaluate_chunk
from qsim.core.kron import kron_element
from qsim.core.address_map import map_output_address
from qsim.errors import AddressRangeError
from qsim.interfaces.quantum_types import Circuit, GateStep, InputState, QubitPair
from qsim.tests.conftest import load_resource, make_random_circuit, make_random_state


def test_empty_circuit_all_ones_input():
    m = 5
    state = InputState(tuple(QubitPair(0, 1) for _ in range(m)))
    chunk = evaluate_chunk(Circuit(m), state, 0, 1 << m)
    expected = np.zeros(1 << m, dtype=complex)
    expected[-1] = 1
    assert np.array_equal(chunk.amps, expected)


def test_cnot_on_basis_011_lands_on_010():
    circuit, state = load_resource("cnot.qc")
    amps = evaluate_chunk(circuit, state, 0, 8).amps
    assert amps[0b010] == 1
    assert np.count_nonzero(amps) == 1


def test_cnot_on_uniform_product_state():
    alpha, beta = 0.6, 0.8j
    state = InputState(tuple(QubitPair(alpha, beta) for _ in range(3)))
    circuit = Circuit(3, (GateStep.bitflip(1, [2]),))
    amps = evaluate_chunk(circuit, state, 0, 8).amps
    # output 0b010 is sourced from input 0b011: q3(0) q2(1) q1(1)
    assert amps[0b010] == pytest.approx(alpha * beta * beta)
    assert np.max(np.abs(amps - dense_circuit(circuit) @ dense_input(state))) <= 1e-15


def test_chunk_matches_per_row_definition(rng):
    circuit = make_random_circuit(rng, 9, 25)
    state = make_random_state(rng, 9)
    chunk = evaluate_chunk(circuit, state, 100, 50)
    assert chunk.start == 100 and len(chunk) == 50
    for k in range(50):
        j, phi = map_output_address(circuit, 100 + k)
        assert abs(chunk.amps[k] - phi * kron_element(state, j)) <= 1e-12 * max(1.0, abs(chunk.amps[k]))


def test_range_errors():
    circuit = Circuit(3)
    state = InputState.zeros(3)
    with pytest.raises(AddressRangeError):
        evaluate_chunk(circuit, state, 4, 5)
    with pytest.raises(AddressRangeError):
        evaluate_chunk(circuit, state, 0, 0)
    with pytest.raises(AddressRangeError):
        evaluate_chunk(circuit, InputState.zeros(2), 0, 1)


def test_oracle_equivalence_over_random_circuits(rng):
    for _ in range(200):
        m = int(rng.integers(2, 9))
        circuit = make_random_circuit(rng, m, int(rng.integers(0, 65)))
        state = random_input(m, seed=int(rng.integers(0, 1 << 30)))
        got = evaluate_chunk(circuit, state, 0, 1 << m).amps
        expected = dense_circuit(circuit) @ dense_input(state)
        assert np.max(np.abs(got - expected)) <= 1e-12


def test_norm_conservation_at_twenty_qubits():
    m = 20
    circuit = random_circuit(m, 100, seed=3)
    state = random_input(m, seed=3, normalized=False)
    out = evaluate_chunk(circuit, state, 0, 1 << m).amps
    assert abs(np.linalg.norm(out) - state.norm()) <= 1e-10 * max(1.0, state.norm())


def test_forty_qubit_window_against_ten_qubit_embedding():
    # gates only touch bits 1..10, so the low 16-element window of the M=40
    # output equals the M=10 run when the upper 30 qubits start in |0>
    small = random_circuit(10, 50, seed=11)
    large = Circuit(40, small.steps)
    low = random_input(10, seed=11)
    state = InputState(low.qubits + tuple(QubitPair(1, 0) for _ in range(30)))
    start = 1000
    big = evaluate_chunk(large, state, start, 16).amps
    ref = evaluate_chunk(small, low, start, 16).amps
    assert np.array_equal(big, ref)


def test_forty_qubit_million_element_chunk():
    circuit = random_circuit(40, 50, seed=5)
    state = random_input(40, seed=5)
    start = (1 << 39) + 12345
    chunk = evaluate_chunk(circuit, state, start, 1 << 20)
    assert len(chunk) == 1 << 20
    assert chunk.amps.nbytes == 16 << 20
    j, phi = map_output_address(circuit, start + 777)
    assert abs(chunk.amps[777] - phi * kron_element(state, j)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=10), st.data())
def test_chunk_gluing_is_bit_identical(m, data):
    seed = data.draw(st.integers(min_value=0, max_value=10_000))
    circuit = random_circuit(m, 30, seed=seed)
    state = random_input(m, seed=seed)
    dim = 1 << m
    cuts = sorted(data.draw(st.sets(st.integers(min_value=1, max_value=dim - 1), max_size=8))) if dim > 1 else []
    bounds = [0] + cuts + [dim]
    pieces = [evaluate_chunk(circuit, state, a, b - a).amps for a, b in zip(bounds, bounds[1:])]
    whole = evaluate_chunk(circuit, state, 0, dim).amps
    assert np.concatenate(pieces).tobytes() == whole.tobytes()


def test_cphase_pi_gives_exact_signs():
    state = InputState(tuple(QubitPair(1 / math.sqrt(2), 1 / math.sqrt(2)) for _ in range(2)))
    circuit = Circuit(2, (GateStep.cphase(math.pi, [1, 2]),))
    amps = evaluate_chunk(circuit, state, 0, 4).amps
    assert amps[3] == -amps[0]
    assert np.all(amps.imag == 0)
    assert abs(abs(amps[0]) - 0.5) < 1e-15


def test_toffoli_resource_against_dense():
    circuit, state = load_resource("toffoli.qc")
    amps = evaluate_chunk(circuit, state, 0, 16).amps
    assert np.max(np.abs(amps - dense_circuit(circuit) @ dense_input(state))) <= 1e-15
    # |0 q3 1 1> with q3 in superposition; when a(3)=1 the target flips, then a(1) <-> a(4)
    nonzero = sorted(int(i) for i in np.flatnonzero(np.abs(amps) > 0))
    assert nonzero == [0b1010, 0b1111]


def test_large_angle_phase_matches_dense():
    circuit = Circuit(2, (GateStep.cphase(1e16, [1]), GateStep.cphase(-2.0 ** 55, [1, 2])))
    state = random_input(2, seed=1)
    got = evaluate_chunk(circuit, state, 0, 4).amps
    assert np.max(np.abs(got - dense_circuit(circuit) @ dense_input(state))) <= 1e-12
