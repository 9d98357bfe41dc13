#!/usr/bin/env python3
"""
Randomized equivalence suites: deferred tracking, immediate corrections and
Clifford+T lowering all reproduce the ideal circuit up to global phase.
"""

import numpy as np
import pytest

from pauli_tracking.circuit import GateKind, lower_clifford_t, random_circuit
from pauli_tracking.sim import (
    RunMode,
    apply_frame,
    check_run,
    equal_up_to_phase,
    execute,
    ideal_apply,
    random_state,
)
from pauli_tracking.tracker import track

TOL = 1e-9
NATIVE_NO_CNOT = {GateKind.RX4: 1.0, GateKind.RZ4: 1.0, GateKind.RZ8: 1.0}
CLIFFORD_T = {GateKind.CNOT: 1.0, GateKind.H: 1.0, GateKind.P: 1.0, GateKind.T: 1.0}


def _random_triple(trial: int, max_n: int, max_m: int, weights):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([2024, trial])))
    n = int(rng.integers(1, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    if n == 1:
        weights = {k: w for k, w in weights.items() if k != GateKind.CNOT}
    circuit = random_circuit(n, m, seed=trial, weights=weights)
    return circuit, random_state(tuple(range(n)), rng), int(rng.integers(0, 2 ** 31))


def test_deferred_tracking_reproduces_ideal():
    failures = []
    for trial in range(1000):
        circuit, state, seed = _random_triple(trial, 6, 30, NATIVE_NO_CNOT | {GateKind.CNOT: 1.0})
        ok, _ = check_run(circuit, state, seed, RunMode.DEFERRED, TOL)
        if not ok:
            failures.append(trial)
    assert failures == []


def test_immediate_corrections_reproduce_ideal():
    for trial in range(100):
        circuit, state, seed = _random_triple(trial, 6, 30, NATIVE_NO_CNOT | {GateKind.CNOT: 1.0})
        result = execute(circuit, RunMode.IMMEDIATE, state, seed)
        assert equal_up_to_phase(result.final_state, ideal_apply(circuit, state), TOL), trial


def test_uncorrected_output_usually_differs():
    wrong = 0
    for trial in range(50):
        circuit, state, seed = _random_triple(trial, 4, 20, NATIVE_NO_CNOT | {GateKind.CNOT: 1.0})
        result = execute(circuit, RunMode.DEFERRED, state, seed)
        if result.frame.nontrivial_count and not equal_up_to_phase(
            result.final_state, ideal_apply(circuit, state), TOL
        ):
            wrong += 1
    assert wrong > 0


def test_lowering_preserves_the_unitary():
    for trial in range(100):
        circuit, state, _ = _random_triple(trial, 5, 20, CLIFFORD_T)
        lowered = lower_clifford_t(circuit)
        assert lowered.is_native
        assert equal_up_to_phase(ideal_apply(lowered, state), ideal_apply(circuit, state), TOL), trial


@pytest.mark.parametrize("trial", range(5))
def test_lowered_circuits_run_with_tracking(trial):
    circuit, state, seed = _random_triple(trial, 4, 15, CLIFFORD_T)
    lowered = lower_clifford_t(circuit)
    result = execute(lowered, RunMode.DEFERRED, state, seed)
    corrected = apply_frame(result.final_state, track(lowered, result.record))
    assert equal_up_to_phase(corrected, ideal_apply(circuit, state), TOL)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
