"""Exception hierarchy. Library code raises these; only the CLI maps them to exit codes."""

from typing import Optional


class PauliTrackingError(Exception):
    """Base class for every error raised by the package"""


class CircuitFormatError(PauliTrackingError):
    """Malformed circuit text"""

    def __init__(self, line: Optional[int], message: str):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class RecordFormatError(PauliTrackingError):
    """Malformed measurement record text"""

    def __init__(self, line: Optional[int], message: str):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class RecordMismatchError(PauliTrackingError):
    """Measurement record does not fit the circuit"""

    def __init__(self, gate_index: Optional[int], message: str):
        self.gate_index = gate_index
        prefix = f"gate {gate_index}: " if gate_index is not None else ""
        super().__init__(f"{prefix}{message}")


class SessionError(PauliTrackingError):
    """Streaming tracker session used out of order"""


class GenerationError(PauliTrackingError):
    """Invalid parameters for the random circuit generator"""


class SimulationError(PauliTrackingError):
    """Invalid operation on a state vector"""


class CapacityError(SimulationError):
    """Circuit exceeds the simulator's qubit bound"""


class OracleError(PauliTrackingError):
    """The oracle could not certify a unique table entry"""
