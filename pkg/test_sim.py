#!/usr/bin/env python3
"""
Tests for the state-vector simulator and the teleportation gadgets
"""

import numpy as np
import pytest

from pauli_tracking.algebra import PauliStatus, matrix_of
from pauli_tracking.circuit import Circuit, Gate, GateKind, parse_circuit, random_circuit
from pauli_tracking.errors import CapacityError, CircuitFormatError, SimulationError
from pauli_tracking.sim import (
    CNOT_MATRIX,
    GATE_MATRICES,
    ResourceState,
    RunMode,
    StateVector,
    apply_cnot,
    apply_frame,
    apply_unitary1,
    dump_state,
    equal_up_to_phase,
    execute,
    forcing,
    ideal_apply,
    inject,
    measure,
    parse_state,
    random_state,
    teleport_rx4,
    teleport_rz4,
    teleport_rz8,
)
from pauli_tracking.tracker import track

FIG2 = parse_circuit("qubits 2\nRX4 0\nCNOT 0 1\nRZ8 1\nCNOT 0 1\nRZ4 1\nRZ4 0\n")


def _rng(seed=0):
    return np.random.Generator(np.random.PCG64(seed))


# ================== STATE VECTOR ==================

def test_inject_appends_resource():
    state = StateVector.basis((0,), "1").inject("a", ResourceState.Y)
    assert state.labels == (0, "a")
    np.testing.assert_allclose(state.amplitudes, [0, 0, 1 / np.sqrt(2), 1j / np.sqrt(2)])


def test_functional_wrappers():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    state = apply_unitary1(StateVector.basis((0,), "0"), 0, h)
    state = inject(state, 1, ResourceState.Y)
    state = apply_cnot(state, 1, 0)
    bit, rest = measure(StateVector.basis((0,), "0").apply_unitary1(0, h), 0, "X", _rng())
    assert bit == 0 and rest.num_qubits == 0
    assert state.labels == (0, 1)
    assert state.norm() == pytest.approx(1.0)


def test_resource_states():
    np.testing.assert_allclose(ResourceState.A.vector, [1 / np.sqrt(2), np.exp(1j * np.pi / 4) / np.sqrt(2)])
    np.testing.assert_allclose(
        ResourceState.Y_MINUS.vector, GATE_MATRICES[GateKind.RX4] @ np.array([1, 0]), atol=1e-15
    )


def test_inject_duplicate_label():
    with pytest.raises(SimulationError):
        StateVector.basis((0, 1), "00").inject(1, ResourceState.A)


def test_cnot_flips_target_when_control_set():
    state = StateVector.basis((0, 1, 2), "100")
    np.testing.assert_array_equal(state.apply_cnot(0, 2).amplitudes, StateVector.basis((0, 1, 2), "101").amplitudes)
    np.testing.assert_array_equal(state.apply_cnot(2, 0).amplitudes, state.amplitudes)
    np.testing.assert_array_equal(state.apply_cnot(0, 1).apply_cnot(1, 2).amplitudes,
                                  StateVector.basis((0, 1, 2), "111").amplitudes)


def test_cnot_agrees_with_matrix():
    state = random_state(("c", "t"), _rng(1))
    np.testing.assert_allclose(state.apply_cnot("c", "t").amplitudes, CNOT_MATRIX @ state.amplitudes)
    swapped = state.reorder(("t", "c"))
    np.testing.assert_allclose(
        swapped.apply_cnot("c", "t").reorder(("c", "t")).amplitudes, CNOT_MATRIX @ state.amplitudes
    )


def test_cnot_errors():
    state = StateVector.basis((0, 1), "00")
    with pytest.raises(SimulationError):
        state.apply_cnot(0, 0)
    with pytest.raises(SimulationError):
        state.apply_cnot(0, 7)


def test_unitary_on_middle_qubit():
    state = random_state((0, 1, 2), _rng(2))
    u = GATE_MATRICES[GateKind.RX4]
    expected = np.kron(np.kron(np.eye(2), u), np.eye(2)) @ state.amplitudes
    np.testing.assert_allclose(state.apply_unitary1(1, u).amplitudes, expected, atol=1e-12)


def test_non_unitary_rejected():
    with pytest.raises(SimulationError):
        StateVector.basis((0,), "0").apply_unitary1(0, np.array([[1, 1], [0, 1]]))


def test_measure_removes_qubit():
    state = StateVector.basis((0, 1), "01")
    bit, rest = state.measure(1, "Z", _rng())
    assert bit == 1
    assert rest.labels == (0,)
    np.testing.assert_allclose(rest.amplitudes, [1, 0])


def test_x_measurement_of_plus():
    plus = StateVector((0,), [1 / np.sqrt(2), 1 / np.sqrt(2)])
    for seed in range(5):
        bit, rest = plus.measure(0, "X", _rng(seed))
        assert bit == 0
        assert rest.num_qubits == 0


def test_measure_dead_label():
    with pytest.raises(SimulationError):
        StateVector.basis((0,), "0").measure(3, "Z", _rng())


def test_project_renormalises():
    state = random_state((0, 1), _rng(3))
    prob, rest = state.project(0, "Z", 1)
    expected = state.amplitudes[2:]
    assert prob == pytest.approx(float(np.sum(np.abs(expected) ** 2)))
    np.testing.assert_allclose(rest.amplitudes, expected / np.sqrt(prob))
    assert rest.norm() == pytest.approx(1.0)


def test_project_zero_branch():
    with pytest.raises(SimulationError):
        StateVector.basis((0,), "0").project(0, "Z", 1)


def test_equal_up_to_phase():
    a = random_state((0, 1), _rng(4))
    b = StateVector((0, 1), a.amplitudes * np.exp(0.7j))
    assert equal_up_to_phase(a, b)
    assert not equal_up_to_phase(a, a.apply_pauli(0, PauliStatus.Z))
    with pytest.raises(SimulationError):
        equal_up_to_phase(a, StateVector.basis((0,), "0"))


# ================== IDENTITIES ==================

def test_hadamard_from_rotations():
    p = GATE_MATRICES[GateKind.P]
    np.testing.assert_allclose(p @ GATE_MATRICES[GateKind.RX4] @ p, GATE_MATRICES[GateKind.H], atol=1e-15)


def test_t_squared_is_p():
    t = GATE_MATRICES[GateKind.T]
    np.testing.assert_allclose(t @ t, GATE_MATRICES[GateKind.P], atol=1e-15)


def test_z_passes_through_rz4_exactly():
    x, z = matrix_of(PauliStatus.X), matrix_of(PauliStatus.Z)
    rz4 = GATE_MATRICES[GateKind.RZ4]
    np.testing.assert_array_equal(x @ z @ rz4 @ z, x @ rz4)


def test_cnot_conjugates_x_exactly():
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    x = np.array([[0, 1], [1, 0]])
    eye = np.eye(2, dtype=int)
    x1 = np.kron(x, eye)
    x2 = np.kron(eye, x)
    np.testing.assert_array_equal(cnot @ x1, x1 @ x2 @ cnot)


# ================== GADGETS ==================

def _single_qubit_probe(seed):
    return random_state(("d",), _rng(seed))


@pytest.mark.parametrize(
    "gadget, kind, bit, correction",
    [
        (teleport_rx4, GateKind.RX4, 0, PauliStatus.I),
        (teleport_rx4, GateKind.RX4, 1, PauliStatus.XZ),
        (teleport_rz4, GateKind.RZ4, 0, PauliStatus.I),
        (teleport_rz4, GateKind.RZ4, 1, PauliStatus.XZ),
        (teleport_rz8, GateKind.RZ8, 0, PauliStatus.I),
    ],
)
def test_gadget_branches(gadget, kind, bit, correction):
    psi = _single_qubit_probe(10 + bit)
    out_bit, out = gadget(psi, "d", "a", forcing([bit]))
    assert out_bit == bit
    assert out.labels == ("a",)
    expected = StateVector(("a",), matrix_of(correction) @ GATE_MATRICES[kind] @ psi.amplitudes)
    assert equal_up_to_phase(out, expected)


def test_rz8_second_stage_recovers_t():
    psi = _single_qubit_probe(12)
    _, mid = teleport_rz8(psi, "d", "a1", forcing([1]))
    _, out = teleport_rz4(mid, "a1", "a2", forcing([1]))
    expected = StateVector(("a2",), GATE_MATRICES[GateKind.T] @ psi.amplitudes)
    assert equal_up_to_phase(out, expected)


# ================== EXECUTION ==================

def test_execute_empty_circuit():
    state = random_state((0, 1), _rng(5))
    result = execute(Circuit(2), RunMode.DEFERRED, state, seed=1)
    assert len(result.record) == 0
    np.testing.assert_allclose(result.final_state.amplitudes, state.amplitudes)
    assert result.peak_live_qubits == 2


def test_execute_worked_example_record_shape():
    result = execute(FIG2, RunMode.DEFERRED, StateVector.basis((0, 1), "00"), seed=3)
    assert [e.basis for e in result.record] == ["X", "Z", "Z", "Z"]
    assert result.final_state.labels == (0, 1)
    assert result.frame == track(FIG2, result.record)
    assert result.applied_corrections == 0
    assert result.peak_live_qubits == 3


def test_execute_is_deterministic():
    c = random_circuit(4, 30, seed=6)
    state = random_state(range(4), _rng(6))
    a = execute(c, RunMode.DEFERRED, state, seed=99)
    b = execute(c, RunMode.DEFERRED, state, seed=99)
    assert a.record == b.record
    np.testing.assert_array_equal(a.final_state.amplitudes, b.final_state.amplitudes)


def test_execute_rejects_oversized_circuit():
    with pytest.raises(CapacityError):
        execute(Circuit(20), RunMode.DEFERRED, StateVector.basis(range(20), "0" * 20), seed=0)


def test_execute_rejects_slot_mismatch():
    with pytest.raises(SimulationError):
        execute(FIG2, RunMode.DEFERRED, StateVector.basis((0,), "0"), seed=0)


def test_execute_rejects_clifford_t_gates():
    c = parse_circuit("qubits 1\nH 0\n", extended=True)
    with pytest.raises(CircuitFormatError):
        execute(c, RunMode.IMMEDIATE, StateVector.basis((0,), "0"), seed=0)


def test_peak_live_qubits_bounded():
    c = random_circuit(5, 60, seed=13)
    result = execute(c, RunMode.IMMEDIATE, random_state(range(5), _rng(13)), seed=13)
    assert result.peak_live_qubits <= c.n + 1


def test_norm_is_preserved():
    c = random_circuit(5, 40, seed=14)
    result = execute(c, RunMode.DEFERRED, random_state(range(5), _rng(14)), seed=14)
    assert abs(result.final_state.norm() - 1) < 1e-12


def test_apply_frame_uses_matrices():
    state = random_state((0, 1), _rng(7))
    frame = track(FIG2, execute(FIG2, RunMode.DEFERRED, state, seed=7).record)
    manual = state
    for label, s in zip(state.labels, frame):
        manual = manual.apply_unitary1(label, matrix_of(s))
    np.testing.assert_allclose(apply_frame(state, frame).amplitudes, manual.amplitudes)


def test_ideal_apply_two_qubits():
    c = parse_circuit("qubits 2\nRX4 0\nCNOT 0 1\n")
    out = ideal_apply(c, StateVector.basis((0, 1), "00"))
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(out.amplitudes, [s, 0, 0, -1j * s], atol=1e-15)


# ================== MEASUREMENT STATISTICS ==================

@pytest.mark.parametrize("kind, expected, tol", [("RX4", 0.5, 0.02), ("RZ4", 0.5, 0.02), ("RZ8", 0.75, 0.03)])
def test_immediate_correction_rate(kind, expected, tol):
    trials = 10_000
    c = Circuit(1, tuple(Gate(GateKind(kind), 0) for _ in range(trials)))
    result = execute(c, RunMode.IMMEDIATE, random_state((0,), _rng(20)), seed=2024)
    assert abs(result.applied_corrections / trials - expected) <= tol
    if kind == "RZ8":
        assert abs(result.second_stages / trials - 0.5) <= 0.02


# ================== STATE TEXT ==================

def test_state_dump_format():
    state = StateVector((0, 1), [1 / np.sqrt(2), 0, 0, -1j / np.sqrt(2)])
    assert dump_state(state) == (
        "0.707106781187 0.000000000000\n"
        "0.000000000000 0.000000000000\n"
        "0.000000000000 0.000000000000\n"
        "0.000000000000 -0.707106781187\n"
    )


def test_parse_state():
    state = parse_state("# amplitudes\n0 0\n1 0\n", (0,))
    np.testing.assert_allclose(state.amplitudes, [0, 1])
    with pytest.raises(SimulationError):
        parse_state("1 0\n1 0\n", (0,))
    with pytest.raises(SimulationError):
        parse_state("1 0\n", (0,))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
