"""Pauli-frame tracking for teleportation-based quantum circuits."""

from .algebra import ALL_STATUSES, PauliStatus, compose, flip_x, flip_z, matrix_of
from .circuit import (
    Circuit,
    Gate,
    GateKind,
    cnot,
    lower_clifford_t,
    parse_circuit,
    parse_weights,
    random_circuit,
    serialize_circuit,
)
from .config import Settings, configure_logging, load_settings
from .errors import (
    CapacityError,
    CircuitFormatError,
    GenerationError,
    OracleError,
    PauliTrackingError,
    RecordFormatError,
    RecordMismatchError,
    SessionError,
    SimulationError,
)
from .tracker import (
    CorrectionFrame,
    MeasurementRecord,
    Outcome,
    TrackerSession,
    parse_frame,
    parse_record,
    random_record,
    serialize_record,
    tau_cnot,
    tau_rotation,
    track,
    track_streaming,
    track_trace,
)

__all__ = [
    "ALL_STATUSES",
    "CapacityError",
    "Circuit",
    "CircuitFormatError",
    "CorrectionFrame",
    "Gate",
    "GateKind",
    "GenerationError",
    "MeasurementRecord",
    "OracleError",
    "Outcome",
    "PauliStatus",
    "PauliTrackingError",
    "RecordFormatError",
    "RecordMismatchError",
    "SessionError",
    "Settings",
    "SimulationError",
    "TrackerSession",
    "cnot",
    "compose",
    "configure_logging",
    "flip_x",
    "flip_z",
    "load_settings",
    "lower_clifford_t",
    "matrix_of",
    "parse_circuit",
    "parse_frame",
    "parse_record",
    "parse_weights",
    "random_circuit",
    "random_record",
    "serialize_circuit",
    "serialize_record",
    "tau_cnot",
    "tau_rotation",
    "track",
    "track_streaming",
    "track_trace",
]
