"""Projective fluorescence readout: |0> bright, |1> dark.

The aux level does not fluoresce either, so it reads as ``"1"``; any aux
population above :data:`AUX_FLAG_THRESHOLD` is flagged as leakage.
Bitstrings list ion N-1 first and ion 0 last.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from iontrapqc.pulse.register import AUX, StateVector

AUX_FLAG_THRESHOLD = 1e-6


@dataclass(frozen=True)
class Measurement:
    bits: str
    state: StateVector  # post-measurement state
    aux_population: float

    @property
    def aux_flag(self) -> bool:
        return self.aux_population > AUX_FLAG_THRESHOLD


def _dark_mask(state: StateVector) -> np.ndarray:
    """Integer outcome (bit m = ion m dark) for every basis state, shaped like the tensor."""
    space = state.space
    outcome = np.zeros(space.shape, dtype=np.int64)
    level = np.arange(3)
    dark = (level == 1) | (level == AUX)
    for ion in range(space.ion_count):
        shape = [1] * len(space.shape)
        shape[space.ion_axis(ion)] = 3
        outcome = outcome + (dark.astype(np.int64) << ion).reshape(shape)
    return outcome


def outcome_probabilities(state: StateVector) -> np.ndarray:
    """Probability of each readout pattern, indexed by the integer value of the bitstring."""
    outcome = _dark_mask(state).reshape(-1)
    return np.bincount(outcome, weights=state.probabilities(), minlength=2**state.space.ion_count)


def _bits(value: int, n: int) -> str:
    return format(value, f"0{n}b")


def measure(state: StateVector, seed=None) -> Measurement:
    """Measure every ion once; ``seed`` is an int or a :class:`numpy.random.Generator`."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    probs = outcome_probabilities(state)
    value = int(rng.choice(probs.size, p=probs / probs.sum()))
    keep = _dark_mask(state).reshape(-1) == value
    amps = np.where(keep, state.amplitudes, 0)
    collapsed = StateVector(state.space, amps / np.linalg.norm(amps))
    return Measurement(bits=_bits(value, state.space.ion_count), state=collapsed, aux_population=state.aux_population())


def sample_counts(state: StateVector, shots: int, seed=None) -> dict[str, int]:
    """Readout histogram over ``shots`` independent preparations of ``state``."""
    if shots < 1:
        raise ValueError("shots must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    probs = outcome_probabilities(state)
    counts = rng.multinomial(shots, probs / probs.sum())
    n = state.space.ion_count
    return {_bits(k, n): int(c) for k, c in enumerate(counts) if c}
