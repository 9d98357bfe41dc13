"""
Gate-level circuit representation.

Circuits use the teleportation gate set {CNOT, RX4, RZ4, RZ8}. The extended
set adds H, P and T, which ``lower_clifford_t`` rewrites into the native set.

Circuit text format (UTF-8, line oriented)::

    # comment
    qubits 2
    RX4 0
    CNOT 0 1

The first non-comment line is ``qubits <n>``; each further line holds one
gate. ``#`` starts a comment and blank lines are ignored. Qubit indices are
0-based.

Random circuits draw from NumPy's PCG64 bit generator seeded through
``SeedSequence(seed)``. Only ``Generator.random()`` doubles are consumed,
three per gate: one picks the kind, one the first operand, one the CNOT
target. That stream is fixed by the PCG64 algorithm and is the same on every
platform.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from .errors import CircuitFormatError, GenerationError

logger = logging.getLogger(__name__)


class GateKind(str, Enum):
    CNOT = "CNOT"
    RX4 = "RX4"
    RZ4 = "RZ4"
    RZ8 = "RZ8"
    H = "H"
    P = "P"
    T = "T"

    def __str__(self) -> str:
        return self.value


ROTATION_KINDS = frozenset({GateKind.RX4, GateKind.RZ4, GateKind.RZ8})
NATIVE_KINDS = frozenset({GateKind.CNOT}) | ROTATION_KINDS
CLIFFORD_T_KINDS = frozenset({GateKind.CNOT, GateKind.H, GateKind.P, GateKind.T})
EXTENDED_KINDS = NATIVE_KINDS | CLIFFORD_T_KINDS


@dataclass(frozen=True)
class Gate:
    """One gate; ``control`` is set for CNOT only"""
    kind: GateKind
    target: int
    control: Optional[int] = None

    @property
    def is_rotation(self) -> bool:
        return self.kind in ROTATION_KINDS

    @property
    def qubits(self) -> Tuple[int, ...]:
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)

    def __str__(self) -> str:
        return " ".join([self.kind.value, *map(str, self.qubits)])


def cnot(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, target, control)


@dataclass(frozen=True)
class Circuit:
    """Qubit count plus gates in execution order"""
    n: int
    gates: Tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise CircuitFormatError(None, f"qubit count must be >= 1, got {self.n}")
        for index, gate in enumerate(self.gates):
            problem = _gate_problem(gate, self.n)
            if problem:
                raise CircuitFormatError(None, f"gate {index}: {problem}")

    @property
    def m(self) -> int:
        return len(self.gates)

    def count(self, *kinds: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind in kinds)

    @property
    def rotation_count(self) -> int:
        return self.count(*ROTATION_KINDS)

    @property
    def is_native(self) -> bool:
        return all(g.kind in NATIVE_KINDS for g in self.gates)

    def require_native(self) -> None:
        """Reject H/P/T gates, which only exist before lowering"""
        for index, gate in enumerate(self.gates):
            if gate.kind not in NATIVE_KINDS:
                raise CircuitFormatError(
                    None, f"gate {index}: {gate.kind} is not a teleportation gate; lower the circuit first"
                )


def _gate_problem(gate: Gate, n: int) -> Optional[str]:
    if not isinstance(gate.kind, GateKind):
        return f"unknown gate kind {gate.kind!r}"
    for q in gate.qubits:
        if not 0 <= q < n:
            return f"qubit index {q} out of range [0, {n})"
    if gate.kind == GateKind.CNOT:
        if gate.control is None:
            return "CNOT needs a control qubit"
        if gate.control == gate.target:
            return f"CNOT control equals target ({gate.target})"
    elif gate.control is not None:
        return f"{gate.kind} takes a single qubit"
    return None


# ================== TEXT FORMAT ==================

def parse_circuit(text: str, extended: bool = False) -> Circuit:
    """Parse circuit text; ``extended`` also admits H, P and T"""
    allowed = EXTENDED_KINDS if extended else NATIVE_KINDS
    n = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 2 or tokens[0] != "qubits":
                raise CircuitFormatError(lineno, f"expected 'qubits <n>' header, got {line!r}")
            n = _parse_int(tokens[1], lineno)
            if n < 1:
                raise CircuitFormatError(lineno, f"qubit count must be >= 1, got {n}")
            continue

        mnemonic, operands = tokens[0], tokens[1:]
        try:
            kind = GateKind(mnemonic)
        except ValueError:
            kind = None
        if kind is None or kind not in allowed:
            raise CircuitFormatError(lineno, f"unknown gate mnemonic {mnemonic!r}")

        expected = 2 if kind == GateKind.CNOT else 1
        if len(operands) != expected:
            raise CircuitFormatError(lineno, f"{kind} takes {expected} operand(s), got {len(operands)}")
        qubits = [_parse_int(tok, lineno) for tok in operands]
        gate = cnot(*qubits) if kind == GateKind.CNOT else Gate(kind, qubits[0])
        problem = _gate_problem(gate, n)
        if problem:
            raise CircuitFormatError(lineno, problem)
        gates.append(gate)

    if n is None:
        raise CircuitFormatError(None, "missing 'qubits <n>' header")
    return Circuit(n, tuple(gates))


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitFormatError(lineno, f"expected an integer, got {token!r}") from None


def serialize_circuit(c: Circuit) -> str:
    """Canonical text form"""
    lines = [f"qubits {c.n}"]
    lines.extend(str(g) for g in c.gates)
    return "\n".join(lines) + "\n"


# ================== GENERATION ==================

DEFAULT_WEIGHTS: Dict[GateKind, float] = {
    GateKind.CNOT: 1.0,
    GateKind.RX4: 1.0,
    GateKind.RZ4: 1.0,
    GateKind.RZ8: 1.0,
}


def parse_weights(text: str) -> Dict[GateKind, float]:
    """Parse ``CNOT=1,RX4=2,...``; kinds left out get weight 0"""
    weights = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        if not sep:
            raise GenerationError(f"weight entry {item!r} is not KIND=VALUE")
        try:
            kind = GateKind(name.strip().upper())
            weights[kind] = float(value)
        except ValueError:
            raise GenerationError(f"bad weight entry {item!r}") from None
        if kind not in NATIVE_KINDS:
            raise GenerationError(f"{kind} cannot be generated; weights apply to CNOT, RX4, RZ4 and RZ8")
    return weights


def random_circuit(
    n: int,
    m: int,
    seed: int,
    weights: Optional[Mapping[GateKind, float]] = None,
) -> Circuit:
    """Seeded random circuit with exactly ``m`` gates"""
    weights = dict(DEFAULT_WEIGHTS if weights is None else weights)
    foreign = sorted(str(k) for k in weights if k not in NATIVE_KINDS)
    if foreign:
        raise GenerationError(f"cannot generate {', '.join(foreign)}; weights apply to CNOT, RX4, RZ4 and RZ8")
    kinds = [k for k in GateKind if k in weights]
    w = np.array([weights[k] for k in kinds], dtype=float)

    if n < 1:
        raise GenerationError(f"qubit count must be >= 1, got {n}")
    if m < 0:
        raise GenerationError(f"gate count must be >= 0, got {m}")
    if seed < 0:
        raise GenerationError(f"seed must be a nonnegative 64-bit integer, got {seed}")
    if not kinds or np.any(w < 0) or not math.isfinite(w.sum()) or w.sum() <= 0:
        raise GenerationError("weights must be nonnegative with a positive sum")
    if n == 1 and weights.get(GateKind.CNOT, 0) > 0:
        raise GenerationError("CNOT needs at least 2 qubits; set its weight to 0 for n = 1")

    cum = np.cumsum(w) / w.sum()
    last_positive = int(np.flatnonzero(w > 0)[-1])
    cum[last_positive:] = 1.0

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    u = rng.random((m, 3))
    kind_index = np.searchsorted(cum, u[:, 0], side="right")
    first = np.minimum((u[:, 1] * n).astype(np.int64), n - 1)
    second = np.minimum((u[:, 2] * max(n - 1, 1)).astype(np.int64), max(n - 2, 0))

    gates = []
    for k, a, b in zip(kind_index.tolist(), first.tolist(), second.tolist()):
        kind = kinds[k]
        if kind == GateKind.CNOT:
            gates.append(cnot(a, b + 1 if b >= a else b))
        else:
            gates.append(Gate(kind, a))

    logger.debug("generated circuit n=%d m=%d seed=%d", n, m, seed)
    return Circuit(n, tuple(gates))


# ================== LOWERING ==================

def lower_clifford_t(c: Circuit) -> Circuit:
    """Rewrite {CNOT, H, P, T} into {CNOT, RX4, RZ4, RZ8}; native gates pass through.

    H becomes RZ4·RX4·RZ4 on the same qubit. The sequence is a palindrome, so
    circuit order and operator order agree.
    """
    lowered = []
    for index, gate in enumerate(c.gates):
        kind = gate.kind
        if kind in NATIVE_KINDS:
            lowered.append(gate)
        elif kind == GateKind.P:
            lowered.append(Gate(GateKind.RZ4, gate.target))
        elif kind == GateKind.T:
            lowered.append(Gate(GateKind.RZ8, gate.target))
        elif kind == GateKind.H:
            q = gate.target
            lowered.extend((Gate(GateKind.RZ4, q), Gate(GateKind.RX4, q), Gate(GateKind.RZ4, q)))
        else:
            raise CircuitFormatError(None, f"gate {index}: cannot lower gate kind {kind!r}")
    return Circuit(c.n, tuple(lowered))

