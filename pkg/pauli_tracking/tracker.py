"""
Pauli tracking engine.

Statuses are propagated gate by gate: CNOTs move X corrections from control
to target and Z corrections from target to control; rotational gates look up
the new status from the certified table in ``tau_rotation_table.json``, keyed
by gate kind, incoming status and the raw measurement outcome.

Outcomes are recorded exactly as the detector reported them. All frame
adjustment, including the R⁸_z second-stage decision, happens here.

Record file format, one line per rotational gate in circuit order::

    X+          RX4, outcome |+>   (X- for |->)
    Z1          RZ4, outcome |1>   (Z0 for |0>)
    Z1 Z0       RZ8, first outcome |1>, second stage ran and gave |0>

Frame file format: ``<qubit> <I|X|Z|XZ>`` per line.
"""

import json
import logging
from dataclasses import dataclass
from importlib import resources
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import PauliStatus, flip_x, flip_z
from .circuit import Circuit, Gate, GateKind
from .errors import RecordFormatError, RecordMismatchError, SessionError

logger = logging.getLogger(__name__)

TABLE_RESOURCE = "tau_rotation_table.json"


# ================== RECORD TYPES ==================

@dataclass(frozen=True)
class Outcome:
    """Raw outcome(s) of one teleportation gadget.

    ``basis`` is "X" for RX4 (0 = |+>, 1 = |->) and "Z" otherwise
    (0 = |0>, 1 = |1>). ``second`` is set only when an R⁸_z second stage ran.
    """
    basis: str
    first: int
    second: Optional[int] = None

    def __post_init__(self):
        if self.basis not in ("X", "Z"):
            raise RecordFormatError(None, f"unknown measurement basis {self.basis!r}")
        if self.first not in (0, 1) or self.second not in (None, 0, 1):
            raise RecordFormatError(None, f"outcome bits must be 0 or 1, got {self.first}, {self.second}")
        if self.basis == "X" and self.second is not None:
            raise RecordFormatError(None, "X-basis outcomes have no second stage")

    def __str__(self) -> str:
        if self.basis == "X":
            return "X-" if self.first else "X+"
        text = f"Z{self.first}"
        if self.second is not None:
            text += f" Z{self.second}"
        return text


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcomes of every rotational gate, in circuit order"""
    entries: Tuple[Outcome, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Outcome]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> Outcome:
        return self.entries[i]


_TOKENS = {"X+": ("X", 0), "X-": ("X", 1), "Z0": ("Z", 0), "Z1": ("Z", 1)}


def parse_record(text: str) -> MeasurementRecord:
    """Parse record text; ``#`` comments and blank lines are ignored"""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) > 2 or any(tok not in _TOKENS for tok in tokens):
            raise RecordFormatError(lineno, f"expected X+, X-, Z0, Z1 or 'Z<b> Z<b>', got {line!r}")
        basis, first = _TOKENS[tokens[0]]
        second = None
        if len(tokens) == 2:
            second_basis, second = _TOKENS[tokens[1]]
            if basis != "Z" or second_basis != "Z":
                raise RecordFormatError(lineno, "only Z outcomes can carry a second stage")
        entries.append(Outcome(basis, first, second))
    return MeasurementRecord(tuple(entries))


def serialize_record(rec: MeasurementRecord) -> str:
    return "".join(f"{entry}\n" for entry in rec)


# ================== FRAME ==================

@dataclass(frozen=True)
class CorrectionFrame:
    """Equivalent output correction statuses S = (s_1, ..., s_n)"""
    statuses: Tuple[PauliStatus, ...]

    @classmethod
    def identity(cls, n: int) -> "CorrectionFrame":
        return cls((PauliStatus.I,) * n)

    @classmethod
    def from_codes(cls, codes: Sequence[int]) -> "CorrectionFrame":
        return cls(tuple(PauliStatus(c) for c in codes))

    def __len__(self) -> int:
        return len(self.statuses)

    def __iter__(self) -> Iterator[PauliStatus]:
        return iter(self.statuses)

    def __getitem__(self, k: int) -> PauliStatus:
        return self.statuses[k]

    @property
    def nontrivial_count(self) -> int:
        """Corrections still to perform at the outputs"""
        return sum(1 for s in self.statuses if s != PauliStatus.I)

    def to_text(self) -> str:
        return "".join(f"{k} {s.name}\n" for k, s in enumerate(self.statuses))


def parse_frame(text: str) -> CorrectionFrame:
    statuses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] != str(len(statuses)):
            raise RecordFormatError(lineno, f"expected '{len(statuses)} <status>', got {line!r}")
        try:
            statuses.append(PauliStatus.parse(parts[1]))
        except ValueError as e:
            raise RecordFormatError(lineno, str(e)) from None
    return CorrectionFrame(tuple(statuses))


# ================== TAU FUNCTIONS ==================

def tau_cnot(s_c: PauliStatus, s_t: PauliStatus) -> Tuple[PauliStatus, PauliStatus]:
    """Propagate statuses across a CNOT"""
    c_out = flip_z(s_c) if s_t.z_flag else PauliStatus(s_c)
    t_out = flip_x(s_t) if s_c.x_flag else PauliStatus(s_t)
    return c_out, t_out


def load_rotation_table() -> Dict[GateKind, Dict[PauliStatus, Dict[str, PauliStatus]]]:
    """Certified rotational table shipped with the package"""
    raw = json.loads(resources.files(__package__).joinpath(TABLE_RESOURCE).read_text())
    return {
        GateKind(kind): {
            PauliStatus[s_in]: {key: PauliStatus[s_out] for key, s_out in row.items()}
            for s_in, row in block.items()
        }
        for kind, block in raw.items()
    }


ROTATION_TABLE = load_rotation_table()


def outcome_key(kind: GateKind, outcome: Outcome) -> str:
    """Ket label of an outcome as used in the table: |+>, |1>, |0*>, |10>, ..."""
    if kind == GateKind.RX4:
        return "|->" if outcome.first else "|+>"
    if kind == GateKind.RZ4:
        return f"|{outcome.first}>"
    if outcome.second is None:
        return f"|{outcome.first}*>"
    return f"|{outcome.first}{outcome.second}>"


def _compile(kind: GateKind, width: int, key_of) -> Tuple[Optional[int], ...]:
    codes = []
    for code in range(4 * width):
        s, bits = divmod(code, width)
        status = ROTATION_TABLE[kind][PauliStatus(s)].get(key_of(bits))
        codes.append(None if status is None else int(status))
    return tuple(codes)


# Flat lookup tables indexed by status * width + outcome bits.
_RX4 = _compile(GateKind.RX4, 2, lambda b: "|->" if b else "|+>")
_RZ4 = _compile(GateKind.RZ4, 2, lambda b: f"|{b}>")
_RZ8_SINGLE = _compile(GateKind.RZ8, 2, lambda b: f"|{b}*>")
_RZ8_DOUBLE = _compile(GateKind.RZ8, 4, lambda b: f"|{b >> 1}{b & 1}>")


def needs_second_stage(s_in: PauliStatus, first_bit: int) -> bool:
    """R⁸_z branch rule: a pending X correction flips the meaning of the first outcome"""
    return bool((first_bit ^ int(s_in)) & 1)


def _expected_basis(kind: GateKind) -> str:
    return "X" if kind == GateKind.RX4 else "Z"


def _rotate(kind: GateKind, s: int, entry: Outcome, gate_index: Optional[int]) -> int:
    if entry.basis != _expected_basis(kind):
        raise RecordMismatchError(gate_index, f"{kind.value} expects a {_expected_basis(kind)} outcome, got {entry}")
    if kind == GateKind.RX4:
        return _RX4[s * 2 + entry.first]
    if kind == GateKind.RZ4:
        if entry.second is not None:
            raise RecordMismatchError(gate_index, f"RZ4 has a single outcome, got {entry}")
        return _RZ4[s * 2 + entry.first]
    second_stage = (entry.first ^ s) & 1
    if second_stage != (entry.second is not None):
        expected = "a second outcome" if second_stage else "no second outcome"
        raise RecordMismatchError(
            gate_index,
            f"RZ8 with incoming {PauliStatus(s).name} and first outcome {entry.first} needs {expected}, got {entry}",
        )
    if second_stage:
        return _RZ8_DOUBLE[s * 4 + entry.first * 2 + entry.second]
    return _RZ8_SINGLE[s * 2 + entry.first]


def tau_rotation(kind: GateKind, s_in: PauliStatus, b: Outcome) -> PauliStatus:
    """Status after a rotational gate given its raw outcome"""
    if kind not in (GateKind.RX4, GateKind.RZ4, GateKind.RZ8):
        raise RecordMismatchError(None, f"{kind} is not a rotational gate")
    return PauliStatus(_rotate(kind, int(s_in), b, None))


# ================== TRACKING ==================

def _run(c: Circuit, rec: MeasurementRecord, trace: Optional[List[CorrectionFrame]]) -> List[int]:
    c.require_native()
    expected = c.rotation_count
    if len(rec) != expected:
        raise RecordMismatchError(
            None, f"record has {len(rec)} entries but the circuit has {expected} rotational gates"
        )
    frame = [0] * c.n
    entries = rec.entries
    cursor = 0
    cnot_kind = GateKind.CNOT
    for index, gate in enumerate(c.gates):
        if gate.kind is cnot_kind:
            sc = frame[gate.control]
            st = frame[gate.target]
            frame[gate.control] = sc ^ (st & 2)
            frame[gate.target] = st ^ (sc & 1)
        else:
            q = gate.target
            frame[q] = _rotate(gate.kind, frame[q], entries[cursor], index)
            cursor += 1
        if trace is not None:
            trace.append(CorrectionFrame.from_codes(frame))
    return frame


def track(c: Circuit, rec: MeasurementRecord) -> CorrectionFrame:
    """Single pass over the circuit; returns the final frame"""
    return CorrectionFrame.from_codes(_run(c, rec, None))


def track_trace(c: Circuit, rec: MeasurementRecord) -> List[CorrectionFrame]:
    """Frame after every gate, in gate order"""
    trace: List[CorrectionFrame] = []
    _run(c, rec, trace)
    return trace


def expected_correction_count(c: Circuit) -> float:
    """Expected number of corrections without tracking: 0.5·m4 + 0.75·m8"""
    return 0.5 * c.count(GateKind.RX4, GateKind.RZ4) + 0.75 * c.count(GateKind.RZ8)


# ================== STREAMING ==================

class TrackerSession:
    """Interleaved tracking for live execution.

    Call ``advance()`` to move to the next rotational gate (CNOTs on the way
    are applied), then ``submit()`` its outcome bit. For R⁸_z, submit the
    first bit; if ``awaiting_second_stage`` is then true, run the second
    stage and submit its bit too. Single owner; not thread safe.
    """

    def __init__(self, circuit: Circuit):
        circuit.require_native()
        self._circuit = circuit
        self._frame = [0] * circuit.n
        self._next = 0
        self._pending: Optional[int] = None
        self._first: Optional[int] = None
        self._entries: List[Outcome] = []

    @property
    def frame(self) -> CorrectionFrame:
        return CorrectionFrame.from_codes(self._frame)

    @property
    def record(self) -> MeasurementRecord:
        return MeasurementRecord(tuple(self._entries))

    @property
    def pending_gate(self) -> Optional[Tuple[int, Gate]]:
        if self._pending is None:
            return None
        return self._pending, self._circuit.gates[self._pending]

    @property
    def awaiting_second_stage(self) -> bool:
        return self._first is not None

    def status(self, qubit: int) -> PauliStatus:
        return PauliStatus(self._frame[qubit])

    def _apply_cnot(self, gate: Gate) -> None:
        sc = self._frame[gate.control]
        st = self._frame[gate.target]
        self._frame[gate.control] = sc ^ (st & 2)
        self._frame[gate.target] = st ^ (sc & 1)

    def advance(self) -> Optional[Tuple[int, Gate]]:
        """Apply CNOTs up to the next rotational gate and return it (None at the end)"""
        if self._pending is not None:
            raise SessionError(f"gate {self._pending} still awaits its outcome")
        gates = self._circuit.gates
        while self._next < len(gates):
            index = self._next
            gate = gates[index]
            self._next += 1
            if gate.kind == GateKind.CNOT:
                self._apply_cnot(gate)
            else:
                self._pending = index
                return index, gate
        return None

    def needs_second_stage(self, first_bit: int) -> bool:
        """Branch decision for the pending R⁸_z gate given its raw first outcome"""
        index, gate = self._require_pending()
        if gate.kind != GateKind.RZ8:
            raise SessionError(f"gate {index} is {gate.kind.value}, not RZ8")
        return needs_second_stage(self.status(gate.target), first_bit)

    def submit(self, bit: int) -> None:
        """Submit the next raw outcome bit for the pending gate"""
        index, gate = self._require_pending()
        q = gate.target
        s = self._frame[q]
        if gate.kind == GateKind.RZ8:
            if self._first is None:
                if needs_second_stage(PauliStatus(s), bit):
                    self._first = bit
                    return
                entry = Outcome("Z", bit)
            else:
                entry = Outcome("Z", self._first, bit)
        else:
            entry = Outcome(_expected_basis(gate.kind), bit)
        self._frame[q] = _rotate(gate.kind, s, entry, index)
        self._entries.append(entry)
        self._pending = None
        self._first = None

    def finish(self) -> CorrectionFrame:
        """Apply trailing CNOTs and return the final frame"""
        if self._pending is not None:
            raise SessionError(f"gate {self._pending} still awaits its outcome")
        gates = self._circuit.gates
        for index in range(self._next, len(gates)):
            if gates[index].kind != GateKind.CNOT:
                raise SessionError(f"gate {index} ({gates[index].kind.value}) has not been consumed")
        for index in range(self._next, len(gates)):
            self._apply_cnot(gates[index])
        self._next = len(gates)
        return self.frame

    def _require_pending(self) -> Tuple[int, Gate]:
        if self._pending is None:
            raise SessionError("no rotational gate is pending; call advance() first")
        return self._pending, self._circuit.gates[self._pending]


def track_streaming(c: Circuit) -> TrackerSession:
    return TrackerSession(c)


def random_record(c: Circuit, seed: int) -> MeasurementRecord:
    """Record of fair random outcomes whose R⁸_z branch flags follow the live frame"""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    bits = (rng.random(2 * c.rotation_count) < 0.5).tolist()
    session = TrackerSession(c)
    cursor = 0
    while session.advance() is not None:
        session.submit(int(bits[cursor]))
        cursor += 1
        if session.awaiting_second_stage:
            session.submit(int(bits[cursor]))
            cursor += 1
    session.finish()
    return session.record
