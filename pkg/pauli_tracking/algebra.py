"""
Correction-status algebra.

A correction status is one of I, X, Z, XZ. It is stored as a pair of flags
packed into two bits (bit 0: X correction, bit 1: Z correction), so the four
statuses form the Klein four-group under XOR and every operation is a single
integer instruction. Phases are discarded at this level; ``matrix_of`` keeps
them.
"""

from enum import IntEnum

import numpy as np


class PauliStatus(IntEnum):
    """Pending correction on one logical qubit"""
    I = 0
    X = 1
    Z = 2
    XZ = 3

    @property
    def x_flag(self) -> bool:
        return bool(self & 1)

    @property
    def z_flag(self) -> bool:
        return bool(self & 2)

    @classmethod
    def from_flags(cls, x_flag: bool, z_flag: bool) -> "PauliStatus":
        return cls(int(bool(x_flag)) | (int(bool(z_flag)) << 1))

    @classmethod
    def parse(cls, text: str) -> "PauliStatus":
        """Parse one of the textual names "I", "X", "Z", "XZ" """
        try:
            return cls[text.strip()]
        except KeyError:
            raise ValueError(f"unknown correction status {text!r}") from None

    def __str__(self) -> str:
        return self.name


def flip_x(s: PauliStatus) -> PauliStatus:
    """s ⊕ X: I↔X, Z↔XZ"""
    return PauliStatus(s ^ 1)


def flip_z(s: PauliStatus) -> PauliStatus:
    """s ⊕ Z: I↔Z, X↔XZ"""
    return PauliStatus(s ^ 2)


def compose(a: PauliStatus, b: PauliStatus) -> PauliStatus:
    """Group product with the phase dropped"""
    return PauliStatus(a ^ b)


_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# XZ is "Z first, then X", i.e. the matrix product X·Z.
_MATRICES = (_I2, _X, _Z, _X @ _Z)
for _m in _MATRICES:
    _m.setflags(write=False)


def matrix_of(s: PauliStatus) -> np.ndarray:
    """2×2 correction matrix for a status (read-only array)"""
    return _MATRICES[PauliStatus(s)]


ALL_STATUSES = tuple(PauliStatus)
