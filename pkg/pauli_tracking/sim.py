"""
Dense state-vector simulator for teleportation-based execution.

The state is kept as a tensor with one axis of length 2 per live qubit;
axis order follows ``labels`` and the first label is the most significant
bit of the flattened amplitude index. Every operation returns a new
``StateVector`` and leaves its input untouched. Measured qubits are removed,
so a run over n logical qubits never holds more than n + 1 live qubits.

Gadgets (data qubit k, fresh ancilla l):

    RX4   ancilla (|0> - i|1>)/√2, CNOT(k -> l), X-measure k
    RZ4   ancilla |Y> = (|0> + i|1>)/√2, CNOT(l -> k), Z-measure k
    RZ8   ancilla |A> = (|0> + e^{iπ/4}|1>)/√2, CNOT(l -> k), Z-measure k,
          then optionally the RZ4 gadget on l as second stage
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Hashable, Iterable, Optional, Sequence, Tuple

import numpy as np

from .algebra import PauliStatus, matrix_of
from .circuit import Circuit, GateKind
from .config import load_settings
from .errors import CapacityError, SimulationError
from .tracker import (
    CorrectionFrame,
    MeasurementRecord,
    Outcome,
    TrackerSession,
    needs_second_stage,
    tau_rotation,
    track,
)

logger = logging.getLogger(__name__)

Label = Hashable
UNITARY_TOL = 1e-12
_SQRT_HALF = 1 / np.sqrt(2)


class ResourceState(Enum):
    """Injectable single-qubit resource states"""
    Y = "Y"
    Y_MINUS = "Y_MINUS"
    A = "A"

    @property
    def vector(self) -> np.ndarray:
        return _RESOURCE_VECTORS[self]


_RESOURCE_VECTORS = {
    ResourceState.Y: np.array([1, 1j]) * _SQRT_HALF,
    ResourceState.Y_MINUS: np.array([1, -1j]) * _SQRT_HALF,
    ResourceState.A: np.array([1, np.exp(1j * np.pi / 4)]) * _SQRT_HALF,
}

_BASIS_VECTORS = {
    ("Z", 0): np.array([1, 0], dtype=complex),
    ("Z", 1): np.array([0, 1], dtype=complex),
    ("X", 0): np.array([1, 1], dtype=complex) * _SQRT_HALF,
    ("X", 1): np.array([1, -1], dtype=complex) * _SQRT_HALF,
}

GATE_MATRICES: Dict[GateKind, np.ndarray] = {
    GateKind.RX4: np.array([[1, -1j], [-1j, 1]]) * _SQRT_HALF,
    GateKind.RZ4: np.diag([1, 1j]).astype(complex),
    # T² = P fixes the phase at e^{iπ/4}.
    GateKind.RZ8: np.diag([1, np.exp(1j * np.pi / 4)]),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    GateKind.P: np.diag([1, 1j]).astype(complex),
    GateKind.T: np.diag([1, np.exp(1j * np.pi / 4)]),
}

CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


class StateVector:
    """Complex amplitudes over an ordered set of live qubit labels"""

    def __init__(self, labels: Iterable[Label], amplitudes):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise SimulationError(f"duplicate qubit labels in {labels}")
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.size != 2 ** len(labels):
            raise SimulationError(
                f"{len(labels)} qubits need {2 ** len(labels)} amplitudes, got {amps.size}"
            )
        self._labels = labels
        self._tensor = amps.reshape((2,) * len(labels))

    @classmethod
    def empty(cls) -> "StateVector":
        return cls((), [1.0])

    @classmethod
    def basis(cls, labels: Sequence[Label], bits: str) -> "StateVector":
        labels = tuple(labels)
        if len(bits) != len(labels) or set(bits) - {"0", "1"}:
            raise SimulationError(f"basis string {bits!r} does not fit {len(labels)} qubits")
        amps = np.zeros(2 ** len(labels), dtype=complex)
        amps[int(bits, 2) if bits else 0] = 1.0
        return cls(labels, amps)

    @property
    def labels(self) -> Tuple[Label, ...]:
        return self._labels

    @property
    def num_qubits(self) -> int:
        return len(self._labels)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._tensor.reshape(-1).copy()

    def norm(self) -> float:
        return float(np.linalg.norm(self._tensor))

    def _axis(self, label: Label) -> int:
        try:
            return self._labels.index(label)
        except ValueError:
            raise SimulationError(f"qubit {label!r} is not live") from None

    def _with(self, labels: Tuple[Label, ...], tensor: np.ndarray) -> "StateVector":
        new = StateVector.__new__(StateVector)
        new._labels = labels
        new._tensor = tensor
        return new

    def inject(self, label: Label, which: ResourceState) -> "StateVector":
        """Tensor on a fresh qubit prepared in a resource state"""
        if label in self._labels:
            raise SimulationError(f"qubit {label!r} is already live")
        tensor = np.multiply.outer(self._tensor, which.vector)
        return self._with(self._labels + (label,), tensor)

    def apply_unitary1(self, q: Label, u: np.ndarray) -> "StateVector":
        u = np.asarray(u, dtype=complex)
        if u.shape != (2, 2) or not np.allclose(u @ u.conj().T, np.eye(2), rtol=0, atol=UNITARY_TOL):
            raise SimulationError("single-qubit operator is not a 2x2 unitary")
        axis = self._axis(q)
        tensor = np.moveaxis(np.tensordot(u, self._tensor, axes=([1], [axis])), 0, axis)
        return self._with(self._labels, tensor)

    def apply_pauli(self, q: Label, s: PauliStatus) -> "StateVector":
        if s == PauliStatus.I:
            self._axis(q)
            return self
        return self.apply_unitary1(q, matrix_of(s))

    def apply_cnot(self, c: Label, t: Label) -> "StateVector":
        if c == t:
            raise SimulationError(f"CNOT control equals target ({c!r})")
        ca, ta = self._axis(c), self._axis(t)
        tensor = self._tensor.copy()
        index = [slice(None)] * self.num_qubits
        index[ca] = 1
        index = tuple(index)
        flip_axis = ta if ta < ca else ta - 1
        tensor[index] = np.flip(tensor[index], axis=flip_axis).copy()
        return self._with(self._labels, tensor)

    def _branch(self, q: Label, basis: str, bit: int) -> Tuple[float, "StateVector"]:
        axis = self._axis(q)
        vec = _BASIS_VECTORS[(basis, bit)]
        branch = np.tensordot(vec.conj(), self._tensor, axes=([0], [axis]))
        prob = float(np.sum(np.abs(branch) ** 2))
        labels = self._labels[:axis] + self._labels[axis + 1:]
        return prob, self._with(labels, branch)

    def project(self, q: Label, basis: str, bit: int) -> Tuple[float, "StateVector"]:
        """Post-select outcome ``bit``; returns its probability and the renormalised rest"""
        prob, rest = self._branch(q, basis, bit)
        if prob < 1e-15:
            raise SimulationError(f"outcome {bit} in basis {basis} on {q!r} has zero probability")
        return prob, rest._with(rest._labels, rest._tensor / np.sqrt(prob))

    def measure(self, q: Label, basis: str, rng: np.random.Generator) -> Tuple[int, "StateVector"]:
        """Born-rule measurement; the measured qubit is discarded"""
        p0, _ = self._branch(q, basis, 0)
        p0 = min(max(p0 / self.norm() ** 2, 0.0), 1.0)
        bit = 0 if rng.random() < p0 else 1
        _, rest = self.project(q, basis, bit)
        return bit, rest

    def relabel(self, mapping: Dict[Label, Label]) -> "StateVector":
        labels = tuple(mapping.get(label, label) for label in self._labels)
        if len(set(labels)) != len(labels):
            raise SimulationError(f"relabelling produces duplicate labels {labels}")
        return self._with(labels, self._tensor)

    def reorder(self, labels: Sequence[Label]) -> "StateVector":
        labels = tuple(labels)
        if sorted(map(repr, labels)) != sorted(map(repr, self._labels)):
            raise SimulationError(f"cannot reorder {self._labels} as {labels}")
        axes = [self._axis(label) for label in labels]
        return self._with(labels, np.transpose(self._tensor, axes))

    def __repr__(self) -> str:
        return f"StateVector(labels={self._labels}, amplitudes={self.amplitudes})"


def inject(state: StateVector, label: Label, which: ResourceState) -> StateVector:
    return state.inject(label, which)


def apply_cnot(state: StateVector, c: Label, t: Label) -> StateVector:
    return state.apply_cnot(c, t)


def apply_unitary1(state: StateVector, q: Label, u: np.ndarray) -> StateVector:
    return state.apply_unitary1(q, u)


def measure(state: StateVector, q: Label, basis: str, rng: np.random.Generator) -> Tuple[int, StateVector]:
    return state.measure(q, basis, rng)


def random_state(labels: Sequence[Label], rng: np.random.Generator) -> StateVector:
    """Random pure state (normalised complex Gaussian amplitudes)"""
    labels = tuple(labels)
    amps = rng.normal(size=2 ** len(labels)) + 1j * rng.normal(size=2 ** len(labels))
    return StateVector(labels, amps / np.linalg.norm(amps))


def apply_frame(state: StateVector, frame: CorrectionFrame) -> StateVector:
    """Perform the tracked corrections: slot k gets matrix_of(s_k)"""
    if len(frame) != state.num_qubits:
        raise SimulationError(f"frame has {len(frame)} statuses for {state.num_qubits} qubits")
    for label, s in zip(state.labels, frame):
        state = state.apply_pauli(label, s)
    return state


# ================== COMPARISON ==================

def _equal_up_to_phase(va: np.ndarray, vb: np.ndarray, tol: float) -> bool:
    va = np.asarray(va, dtype=complex).reshape(-1)
    vb = np.asarray(vb, dtype=complex).reshape(-1)
    if va.shape != vb.shape:
        raise SimulationError(f"dimension mismatch: {va.size} vs {vb.size}")
    pivot = int(np.argmax(np.abs(vb)))
    if abs(vb[pivot]) == 0:
        return float(np.max(np.abs(va))) <= tol
    theta = va[pivot] / vb[pivot]
    theta = theta / abs(theta) if abs(theta) > 0 else 1.0
    return float(np.max(np.abs(va - theta * vb))) <= tol


def equal_up_to_phase(a: StateVector, b: StateVector, tol: float = 1e-9) -> bool:
    """True iff a ≅ θ·b for some unit-modulus θ, taken from b's largest amplitude"""
    if a.num_qubits != b.num_qubits:
        raise SimulationError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return _equal_up_to_phase(a.amplitudes, b.amplitudes, tol)


def matrices_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    if np.shape(a) != np.shape(b):
        raise SimulationError(f"shape mismatch: {np.shape(a)} vs {np.shape(b)}")
    return _equal_up_to_phase(a, b, tol)


# ================== GADGETS ==================

MeasureFn = Callable[[StateVector, Label, str], Tuple[int, StateVector]]


def sampling(rng: np.random.Generator) -> MeasureFn:
    return lambda state, q, basis: state.measure(q, basis, rng)


def forcing(bits: Sequence[int]) -> MeasureFn:
    """Post-select the given outcomes in order"""
    queue = list(bits)

    def measure_fn(state: StateVector, q: Label, basis: str) -> Tuple[int, StateVector]:
        if not queue:
            raise SimulationError("no forced outcome left")
        bit = queue.pop(0)
        return bit, state.project(q, basis, bit)[1]

    return measure_fn


def teleport_rx4(state: StateVector, data: Label, fresh: Label, measure_fn: MeasureFn):
    state = state.inject(fresh, ResourceState.Y_MINUS)
    state = state.apply_cnot(data, fresh)
    return measure_fn(state, data, "X")


def teleport_rz4(state: StateVector, data: Label, fresh: Label, measure_fn: MeasureFn):
    state = state.inject(fresh, ResourceState.Y)
    state = state.apply_cnot(fresh, data)
    return measure_fn(state, data, "Z")


def teleport_rz8(state: StateVector, data: Label, fresh: Label, measure_fn: MeasureFn):
    """First stage only; the caller decides on the RZ4 second stage"""
    state = state.inject(fresh, ResourceState.A)
    state = state.apply_cnot(fresh, data)
    return measure_fn(state, data, "Z")


# ================== EXECUTION ==================

class RunMode(str, Enum):
    IMMEDIATE = "immediate"
    DEFERRED = "deferred"


@dataclass
class RunResult:
    """Outcome of one teleportation-based run"""
    final_state: StateVector
    record: MeasurementRecord
    applied_corrections: int = 0
    second_stages: int = 0
    peak_live_qubits: int = 0
    frame: Optional[CorrectionFrame] = field(default=None)


def _fresh_labels(taken: Iterable[Label]):
    taken = set(taken)
    for i in itertools.count():
        label = ("anc", i)
        if label not in taken:
            yield label


def check_capacity(n: int, max_qubits: Optional[int] = None) -> None:
    limit = load_settings().sim_max_qubits if max_qubits is None else max_qubits
    if n > limit:
        raise CapacityError(f"circuit has {n} qubits; the simulator supports at most {limit}")


def execute(
    c: Circuit,
    mode: RunMode,
    input_state: StateVector,
    seed: int,
    max_qubits: Optional[int] = None,
) -> RunResult:
    """Run the circuit gadget by gadget.

    Immediate mode corrects after every measurement, so the output is
    frame-free. Deferred mode applies no corrections and returns the raw
    record; R⁸_z branch decisions then come from a live tracker session.
    Slot k of the result carries the same label as slot k of the input.
    """
    c.require_native()
    mode = RunMode(mode)
    check_capacity(c.n, max_qubits)
    if input_state.num_qubits != c.n:
        raise SimulationError(f"input has {input_state.num_qubits} qubits, circuit needs {c.n}")

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    sample = sampling(rng)
    input_labels = input_state.labels
    slots = list(input_labels)
    fresh = _fresh_labels(input_labels)
    session = TrackerSession(c) if mode == RunMode.DEFERRED else None

    state = input_state
    entries = []
    corrections = 0
    second_stages = 0
    peak = c.n

    for index, gate in enumerate(c.gates):
        if gate.kind == GateKind.CNOT:
            state = state.apply_cnot(slots[gate.control], slots[gate.target])
            continue

        if session is not None:
            pending = session.advance()
            assert pending is not None and pending[0] == index
        k = gate.target
        out = next(fresh)
        peak = max(peak, state.num_qubits + 1)
        second = False
        if gate.kind == GateKind.RX4:
            bit, state = teleport_rx4(state, slots[k], out, sample)
            entry = Outcome("X", bit)
        elif gate.kind == GateKind.RZ4:
            bit, state = teleport_rz4(state, slots[k], out, sample)
            entry = Outcome("Z", bit)
        else:
            bit, state = teleport_rz8(state, slots[k], out, sample)
            if session is not None:
                second = session.needs_second_stage(bit)
            else:
                second = needs_second_stage(PauliStatus.I, bit)
            if second:
                out2 = next(fresh)
                peak = max(peak, state.num_qubits + 1)
                bit2, state = teleport_rz4(state, out, out2, sample)
                out = out2
                second_stages += 1
                entry = Outcome("Z", bit, bit2)
            else:
                entry = Outcome("Z", bit)
        slots[k] = out
        entries.append(entry)

        if session is not None:
            session.submit(entry.first)
            if entry.second is not None:
                session.submit(entry.second)
        else:
            correction = tau_rotation(gate.kind, PauliStatus.I, entry)
            if correction != PauliStatus.I:
                state = state.apply_pauli(out, correction)
                corrections += 1
            if second:
                corrections += 1

    frame = session.finish() if session is not None else CorrectionFrame.identity(c.n)
    state = state.relabel(dict(zip(slots, input_labels))).reorder(input_labels)
    logger.debug(
        "executed %d gates in %s mode: %d corrections, %d second stages",
        c.m, mode.value, corrections, second_stages,
    )
    return RunResult(
        final_state=state,
        record=MeasurementRecord(tuple(entries)),
        applied_corrections=corrections,
        second_stages=second_stages,
        peak_live_qubits=peak,
        frame=frame,
    )


def ideal_apply(c: Circuit, input_state: StateVector) -> StateVector:
    """Reference evolution by direct matrix multiplication (extended gate set allowed)"""
    if input_state.num_qubits != c.n:
        raise SimulationError(f"input has {input_state.num_qubits} qubits, circuit needs {c.n}")
    labels = input_state.labels
    state = input_state
    for gate in c.gates:
        if gate.kind == GateKind.CNOT:
            state = state.apply_cnot(labels[gate.control], labels[gate.target])
        else:
            state = state.apply_unitary1(labels[gate.target], GATE_MATRICES[gate.kind])
    return state


def check_run(
    c: Circuit,
    input_state: StateVector,
    seed: int,
    mode: RunMode = RunMode.DEFERRED,
    tol: float = 1e-9,
) -> Tuple[bool, RunResult]:
    """Execute and compare with ideal_apply; deferred output is first corrected by the tracked frame"""
    result = execute(c, mode, input_state, seed)
    final = result.final_state
    if RunMode(mode) == RunMode.DEFERRED:
        final = apply_frame(final, track(c, result.record))
    return equal_up_to_phase(final, ideal_apply(c, input_state), tol), result


# ================== STATE TEXT ==================

def dump_state(state: StateVector) -> str:
    """One amplitude per line as ``re im`` with 12 decimals"""
    lines = []
    for a in state.amplitudes:
        re = round(float(a.real), 12) + 0.0
        im = round(float(a.imag), 12) + 0.0
        lines.append(f"{re:.12f} {im:.12f}")
    return "\n".join(lines) + "\n"


def parse_state(text: str, labels: Sequence[Label]) -> StateVector:
    amps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SimulationError(f"line {lineno}: expected 're im', got {line!r}")
        try:
            amps.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise SimulationError(f"line {lineno}: bad amplitude {line!r}") from None
    state = StateVector(labels, amps)
    norm = state.norm()
    if abs(norm - 1) > 1e-6:
        raise SimulationError(f"state is not normalised (norm {norm:.9f})")
    return StateVector(labels, state.amplitudes / norm)
