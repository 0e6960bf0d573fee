"""Gate extraction and phase-insensitive comparison."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from iontrapqc.pulse.gates import cnot
from iontrapqc.pulse.register import RegisterSpace, StateVector

CNOT_MATRIX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def gate_fidelity(expected: np.ndarray, actual: np.ndarray) -> float:
    """|Tr(expected^dagger actual)| / dim; insensitive to a global phase."""
    expected = np.asarray(expected, dtype=complex)
    actual = np.asarray(actual, dtype=complex)
    if expected.shape != actual.shape or expected.shape[0] != expected.shape[1]:
        raise ValueError("fidelity needs two square matrices of equal shape")
    return float(abs(np.trace(expected.conj().T @ actual)) / expected.shape[0])


def _labels(space: RegisterSpace, ions: tuple[int, ...]) -> list[str]:
    """Ket labels for all bit patterns on ``ions`` (first ion most significant); others |0>."""
    labels = []
    for k in range(2 ** len(ions)):
        chars = ["0"] * space.ion_count
        for pos, ion in enumerate(ions):
            bit = (k >> (len(ions) - 1 - pos)) & 1
            chars[space.ion_count - 1 - ion] = str(bit)
        labels.append("".join(chars))
    return labels


@dataclass(frozen=True)
class ExtractedGate:
    matrix: np.ndarray  # amplitudes <out, 0 phonons| G |in, 0 phonons>
    leakage: np.ndarray  # per input, probability leaving the computational 0-phonon subspace
    labels: tuple[str, ...]


def extract_gate(operation, space: RegisterSpace, ions: tuple[int, ...]) -> ExtractedGate:
    """Matrix of ``operation`` on the qubit subspace of ``ions`` with the bus in |0>."""
    labels = _labels(space, ions)
    indices = [space.index(label, 0) for label in labels]
    dim = len(labels)
    matrix = np.zeros((dim, dim), dtype=complex)
    leakage = np.zeros(dim)
    for col, label in enumerate(labels):
        out = operation(StateVector.basis(space, label, 0)).amplitudes
        matrix[:, col] = out[indices]
        leakage[col] = max(0.0, 1.0 - float(np.sum(np.abs(matrix[:, col]) ** 2)))
    return ExtractedGate(matrix=matrix, leakage=leakage, labels=tuple(labels))


@dataclass(frozen=True)
class CnotVerification:
    matrix: np.ndarray
    fidelity: float
    max_state_distance: float  # max over inputs of 1 - |<expected|actual>|
    leakage: float  # worst-case probability outside the 0-phonon qubit subspace
    relative_phases: np.ndarray  # arg of each matched element relative to the first
    squared_identity_error: float  # max |(G^2 - phase * 1)| entry

    @property
    def passed(self) -> bool:
        return self.fidelity >= 1 - 1e-10 and self.leakage < 1e-10


def verify_cnot(control: int = 1, target: int = 0, ion_count: int = 2, phonon_cutoff: int = 1, *, verbatim: bool = False) -> CnotVerification:
    space = RegisterSpace(ion_count, phonon_cutoff)
    gate = extract_gate(lambda s: cnot(s, control, target, verbatim=verbatim), space, (control, target))
    m = gate.matrix
    matched = np.sum(CNOT_MATRIX.conj() * m, axis=0)  # <expected_k | actual_k>
    distance = float(np.max(1 - np.abs(matched)))
    ref = matched[0] if abs(matched[0]) > 1e-12 else 1.0
    phases = np.angle(matched / ref)
    square = m @ m
    phase = square[0, 0] / abs(square[0, 0]) if abs(square[0, 0]) > 1e-12 else 1.0
    return CnotVerification(
        matrix=m,
        fidelity=gate_fidelity(CNOT_MATRIX, m),
        max_state_distance=distance,
        leakage=float(gate.leakage.max()),
        relative_phases=phases,
        squared_identity_error=float(np.max(np.abs(square - phase * np.eye(4)))),
    )
