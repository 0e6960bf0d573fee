"""Hilbert space of N three-level ions plus the centre-of-mass phonon mode.

Basis order (C order of the flat amplitude array): phonon number outermost,
then ion N-1, ..., ion 0 innermost. Each ion has levels 0, 1 and aux (2).
Ket labels follow the same order, e.g. ``"10"`` means ion 1 in |1>, ion 0 in |0>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LEVELS = 3
AUX = 2
LEVEL_CHARS = {"0": 0, "1": 1, "a": AUX}

NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class RegisterSpace:
    ion_count: int
    phonon_cutoff: int = 1  # Fock states 0..phonon_cutoff

    def __post_init__(self):
        if self.ion_count < 1:
            raise ValueError("ion_count must be at least 1")
        if self.phonon_cutoff < 1:
            raise ValueError("phonon_cutoff must be at least 1")

    @property
    def dimension(self) -> int:
        return LEVELS**self.ion_count * (self.phonon_cutoff + 1)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.phonon_cutoff + 1,) + (LEVELS,) * self.ion_count

    def ion_axis(self, ion: int) -> int:
        """Tensor axis holding ion ``ion``."""
        self.check_ion(ion)
        return 1 + (self.ion_count - 1 - ion)

    def check_ion(self, ion: int) -> None:
        if not 0 <= ion < self.ion_count:
            raise IndexError(f"ion index {ion} out of range for {self.ion_count} ions")

    def index(self, levels: str, phonons: int = 0) -> int:
        """Flat basis index of ``|levels> (x) |phonons>``."""
        if len(levels) != self.ion_count:
            raise ValueError(f"need {self.ion_count} level labels, got {levels!r}")
        if not 0 <= phonons <= self.phonon_cutoff:
            raise ValueError(f"phonon number {phonons} outside 0..{self.phonon_cutoff}")
        try:
            digits = [LEVEL_CHARS[ch] for ch in levels]
        except KeyError as exc:
            raise ValueError(f"bad level label in {levels!r}; use 0, 1 or a") from exc
        idx = phonons
        for d in digits:
            idx = idx * LEVELS + d
        return idx

    def label(self, index: int) -> tuple[str, int]:
        """Inverse of :meth:`index`: ``(levels, phonons)``."""
        chars = []
        for _ in range(self.ion_count):
            index, d = divmod(index, LEVELS)
            chars.append("01a"[d])
        return "".join(reversed(chars)), index

    def computational_indices(self, phonons: int = 0) -> list[int]:
        """Indices of all-qubit basis states, ordered like binary numbers."""
        n = self.ion_count
        return [self.index(format(k, f"0{n}b"), phonons) for k in range(2**n)]


class StateVector:
    """Normalized amplitudes over a :class:`RegisterSpace`.

    Instances are treated as values: gate functions return new objects.
    """

    __slots__ = ("space", "amplitudes")

    def __init__(self, space: RegisterSpace, amplitudes, *, check: bool = True):
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.size != space.dimension:
            raise ValueError(f"expected {space.dimension} amplitudes, got {amps.size}")
        if check:
            norm = np.linalg.norm(amps)
            if abs(norm - 1) > NORM_TOLERANCE:
                raise ValueError(f"state not normalized (norm = {norm!r})")
        amps.setflags(write=False)
        self.space = space
        self.amplitudes = amps

    @classmethod
    def basis(cls, space: RegisterSpace, levels: str, phonons: int = 0) -> StateVector:
        amps = np.zeros(space.dimension, dtype=complex)
        amps[space.index(levels, phonons)] = 1
        return cls(space, amps)

    @classmethod
    def from_kets(cls, space: RegisterSpace, kets: dict) -> StateVector:
        """Normalized superposition from ``{levels or (levels, phonons): amplitude}``."""
        amps = np.zeros(space.dimension, dtype=complex)
        for key, value in kets.items():
            levels, phonons = (key, 0) if isinstance(key, str) else key
            amps[space.index(levels, phonons)] += value
        return cls(space, amps / np.linalg.norm(amps))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.space.shape)

    def with_tensor(self, tensor: np.ndarray) -> StateVector:
        return StateVector(self.space, tensor.reshape(-1), check=False)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, levels: str, phonons: int = 0) -> complex:
        return complex(self.amplitudes[self.space.index(levels, phonons)])

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def phonon_populations(self) -> np.ndarray:
        return self.probabilities().reshape(self.space.phonon_cutoff + 1, -1).sum(axis=1)

    def aux_population(self) -> float:
        """Probability that at least one ion is in the aux level."""
        probs = self.probabilities().reshape(self.space.shape)
        mask = np.zeros(self.space.shape, dtype=bool)
        for ion in range(self.space.ion_count):
            index = [slice(None)] * len(self.space.shape)
            index[self.space.ion_axis(ion)] = AUX
            mask[tuple(index)] = True
        return float(probs[mask].sum())

    def overlap(self, other: StateVector) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: StateVector) -> float:
        """|<self|other>|^2."""
        return abs(self.overlap(other)) ** 2

    def to_dict(self, threshold: float = 0.0) -> dict:
        """Serializable form: nonzero amplitudes keyed by ket label."""
        out = {}
        for idx in np.flatnonzero(np.abs(self.amplitudes) > threshold):
            levels, n = self.space.label(int(idx))
            amp = self.amplitudes[idx]
            out[f"{levels};{n}"] = [float(amp.real), float(amp.imag)]
        return out

    def __repr__(self) -> str:
        return f"StateVector(ions={self.space.ion_count}, nmax={self.space.phonon_cutoff}, norm={self.norm:.12f})"


def ground_state(space: RegisterSpace) -> StateVector:
    return StateVector.basis(space, "0" * space.ion_count, 0)
