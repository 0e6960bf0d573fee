"""Qubit register with named segments and the ideal gates that act on it.

Qubit ``i`` is bit ``i`` of the amplitude index. A segment is an ordered tuple
of qubits, least significant first, so a segment holding value ``v`` has qubit
``segment[j]`` equal to bit ``j`` of ``v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 24
NORM_TOLERANCE = 1e-10
CLEAR_TOLERANCE = 1e-12

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


class RegisterError(ValueError):
    """Invalid register layout or qubit arguments."""


class CarryNotClearError(RegisterError):
    """An adder carry qubit was not in |0>, so the circuit would not be reversible."""


@dataclass
class QubitRegister:
    total_qubits: int
    segments: dict[str, tuple[int, ...]] = field(default_factory=dict)
    amplitudes: np.ndarray | None = None

    def __post_init__(self):
        if not 1 <= self.total_qubits <= MAX_QUBITS:
            raise RegisterError(f"register size must be 1..{MAX_QUBITS} qubits, got {self.total_qubits}")
        used = [q for seg in self.segments.values() for q in seg]
        if len(used) != len(set(used)) or any(not 0 <= q < self.total_qubits for q in used):
            raise RegisterError("segments must hold distinct qubits inside the register")
        if self.amplitudes is None:
            self.amplitudes = np.zeros(2**self.total_qubits, dtype=complex)
            self.amplitudes[0] = 1
        else:
            self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
            if self.amplitudes.shape != (2**self.total_qubits,):
                raise RegisterError("amplitude array does not match the register size")
            norm = np.linalg.norm(self.amplitudes)
            if abs(norm - 1) > NORM_TOLERANCE:
                raise RegisterError(f"state not normalized (norm = {norm!r})")

    @classmethod
    def for_modulus(cls, modulus: int) -> QubitRegister:
        """Left register of 2l qubits, right register of l qubits and one ancilla, l = bit length of N."""
        bits = int(modulus).bit_length()
        left = tuple(range(2 * bits))
        right = tuple(range(2 * bits, 3 * bits))
        return cls(3 * bits + 1, {"left": left, "right": right, "ancilla": (3 * bits,)})

    @classmethod
    def basis(cls, total_qubits: int, value: int, segments: dict | None = None) -> QubitRegister:
        amps = np.zeros(2**total_qubits, dtype=complex)
        amps[value] = 1
        return cls(total_qubits, dict(segments or {}), amps)

    def copy(self) -> QubitRegister:
        return QubitRegister(self.total_qubits, dict(self.segments), self.amplitudes.copy())

    def qubits(self, segment) -> tuple[int, ...]:
        """Resolve a segment name or an explicit qubit sequence."""
        if isinstance(segment, str):
            try:
                return self.segments[segment]
            except KeyError:
                raise RegisterError(f"no segment named {segment!r}") from None
        qubits = tuple(int(q) for q in segment)
        if any(not 0 <= q < self.total_qubits for q in qubits):
            raise RegisterError("qubit index out of range")
        return qubits

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def segment_values(self, segment) -> np.ndarray:
        """Value held by ``segment`` in every basis state."""
        idx = np.arange(self.amplitudes.size)
        values = np.zeros_like(idx)
        for j, q in enumerate(self.qubits(segment)):
            values |= ((idx >> q) & 1) << j
        return values

    def distribution(self, segment) -> np.ndarray:
        """Marginal probability of each value of ``segment``."""
        size = 2 ** len(self.qubits(segment))
        return np.bincount(self.segment_values(segment), weights=np.abs(self.amplitudes) ** 2, minlength=size)

    def measure(self, segment, rng: np.random.Generator) -> int:
        """Sample ``segment`` and collapse the state onto the outcome."""
        probs = self.distribution(segment)
        value = int(rng.choice(probs.size, p=probs / probs.sum()))
        keep = self.segment_values(segment) == value
        amps = np.where(keep, self.amplitudes, 0)
        self.amplitudes = amps / np.linalg.norm(amps)
        return value

    def probability_one(self, qubit: int) -> float:
        idx = np.arange(self.amplitudes.size)
        return float(np.sum(np.abs(self.amplitudes[((idx >> qubit) & 1) == 1]) ** 2))


def _check_distinct(register: QubitRegister, qubits) -> None:
    if len(set(qubits)) != len(qubits):
        raise RegisterError(f"qubit indices must be distinct, got {tuple(qubits)}")
    register.qubits(qubits)


def apply_single(register: QubitRegister, qubit: int, matrix: np.ndarray) -> QubitRegister:
    _check_distinct(register, (qubit,))
    out = register.copy()
    view = out.amplitudes.reshape(-1, 2, 2**qubit)
    out.amplitudes = np.einsum("ij,ajb->aib", matrix, view).reshape(-1)
    return out


def hadamard_all(register: QubitRegister, segment) -> QubitRegister:
    """Hadamard on every qubit of ``segment``."""
    for q in register.qubits(segment):
        register = apply_single(register, q, _H)
    return register


def controlled_not(register: QubitRegister, controls, target: int) -> QubitRegister:
    """Flip ``target`` in every basis state whose ``controls`` are all 1."""
    controls = tuple(controls)
    _check_distinct(register, controls + (target,))
    idx = np.arange(register.amplitudes.size)
    fire = np.ones_like(idx, dtype=bool)
    for c in controls:
        fire &= ((idx >> c) & 1) == 1
    source = np.where(fire, idx ^ (1 << target), idx)
    out = register.copy()
    out.amplitudes = register.amplitudes[source]
    return out


def cnot_gate(register: QubitRegister, control: int, target: int) -> QubitRegister:
    return controlled_not(register, (control,), target)


def ccnot_gate(register: QubitRegister, control_a: int, control_b: int, target: int) -> QubitRegister:
    return controlled_not(register, (control_a, control_b), target)


def add_circuit(register: QubitRegister, a: int, b: int, carry: int) -> QubitRegister:
    """Half adder: |a>|b>|0> -> |a>|a XOR b>|a AND b>."""
    _check_distinct(register, (a, b, carry))
    if register.probability_one(carry) > CLEAR_TOLERANCE:
        raise CarryNotClearError(f"carry qubit {carry} is not in |0>")
    return cnot_gate(ccnot_gate(register, a, b, carry), a, b)


def _controlled_phase(register: QubitRegister, control: int, target: int, angle: float) -> None:
    idx = np.arange(register.amplitudes.size)
    both = (((idx >> control) & 1) & ((idx >> target) & 1)).astype(bool)
    register.amplitudes[both] *= np.exp(1j * angle)


def _swap(register: QubitRegister, q1: int, q2: int) -> None:
    idx = np.arange(register.amplitudes.size)
    differ = ((idx >> q1) & 1) != ((idx >> q2) & 1)
    source = np.where(differ, idx ^ ((1 << q1) | (1 << q2)), idx)
    register.amplitudes = register.amplitudes[source]


def qft(register: QubitRegister, segment, *, inverse: bool = False) -> QubitRegister:
    """|a> -> 2^{-k/2} sum_c exp(+2 pi i a c / 2^k) |c> on ``segment`` (sign flipped if ``inverse``).

    Built from Hadamards, controlled phase rotations and a final bit reversal.
    """
    qubits = register.qubits(segment)
    k = len(qubits)
    sign = -1.0 if inverse else 1.0
    out = register.copy()
    if inverse:
        for i in range(k // 2):
            _swap(out, qubits[i], qubits[k - 1 - i])
        for j in range(k):
            for m in range(j):
                _controlled_phase(out, qubits[m], qubits[j], sign * math.pi / 2 ** (j - m))
            out = apply_single(out, qubits[j], _H)
        return out
    for j in reversed(range(k)):
        out = apply_single(out, qubits[j], _H)
        for m in reversed(range(j)):
            _controlled_phase(out, qubits[m], qubits[j], sign * math.pi / 2 ** (j - m))
    for i in range(k // 2):
        _swap(out, qubits[i], qubits[k - 1 - i])
    return out


def inverse_qft(register: QubitRegister, segment) -> QubitRegister:
    return qft(register, segment, inverse=True)


def dft_matrix(k: int) -> np.ndarray:
    """Reference matrix with entries 2^{-k/2} exp(2 pi i a c / 2^k), row c, column a."""
    size = 2**k
    a = np.arange(size)
    return np.exp(2j * np.pi * np.outer(a, a) / size) / math.sqrt(size)
