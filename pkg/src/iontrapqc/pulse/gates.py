"""Ideal laser-pulse unitaries and the composite gates built from them.

Every pulse rotates one pair of basis states (``lower``, ``upper``) with

    lower -> cos(t/2) lower + i e^{-i phi} sin(t/2) upper
    upper -> i e^{+i phi} sin(t/2) lower + cos(t/2) upper

==========  ==========================  ===========================
kind        lower                       upper
==========  ==========================  ===========================
``V``       |0>_m                       |1>_m
``V_aux``   |0>_m                       |aux>_m
``U``       |0>_m |n+1 phonons>         |1>_m |n phonons>
``U_aux``   |0>_m |n+1 phonons>         |aux>_m |n phonons>
==========  ==========================  ===========================

In the default ideal-gate mode ``U`` pulses couple only n = 0 (the two-state
phonon bus). With ``ladder=True`` every n is coupled with angle
``theta * sqrt(n + 1)``, the Jaynes-Cummings scaling.

Sequences are lists in time order: the first pulse is applied first.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from iontrapqc.pulse.register import AUX, StateVector

PULSE_KINDS = ("V", "V_aux", "U", "U_aux")
HALF_PI = math.pi / 2


@dataclass(frozen=True)
class PulseSpec:
    kind: str
    ion: int
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if self.kind not in PULSE_KINDS:
            raise ValueError(f"pulse kind must be one of {PULSE_KINDS}, got {self.kind!r}")
        if int(self.ion) != self.ion or self.ion < 0:
            raise ValueError(f"ion index must be a non-negative integer, got {self.ion!r}")
        if not self.theta >= 0:
            raise ValueError("pulse area theta must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> PulseSpec:
        unknown = set(doc) - {"kind", "ion", "theta", "phi"}
        if unknown:
            raise ValueError(f"unknown pulse fields {sorted(unknown)}")
        return cls(kind=doc["kind"], ion=int(doc["ion"]), theta=float(doc["theta"]), phi=float(doc.get("phi", 0.0)))


def rotation_matrix(theta: float, phi: float) -> np.ndarray:
    """2x2 pulse matrix acting on amplitudes ``(lower, upper)``."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, 1j * np.exp(1j * phi) * s], [1j * np.exp(-1j * phi) * s, c]],
        dtype=complex,
    )


def _rotate(tensor: np.ndarray, lower: tuple, upper: tuple, matrix: np.ndarray) -> None:
    a = tensor[lower].copy()
    b = tensor[upper].copy()
    tensor[lower] = matrix[0, 0] * a + matrix[0, 1] * b
    tensor[upper] = matrix[1, 0] * a + matrix[1, 1] * b


def _index(state: StateVector, ion: int, level: int, phonons=slice(None)) -> tuple:
    idx = [slice(None)] * len(state.space.shape)
    idx[0] = phonons
    idx[state.space.ion_axis(ion)] = level
    return tuple(idx)


def _carrier(state: StateVector, ion: int, theta: float, phi: float, upper_level: int) -> StateVector:
    tensor = state.tensor().copy()
    _rotate(tensor, _index(state, ion, 0), _index(state, ion, upper_level), rotation_matrix(theta, phi))
    return state.with_tensor(tensor)


def _sideband(state: StateVector, ion: int, theta: float, phi: float, upper_level: int, ladder: bool) -> StateVector:
    tensor = state.tensor().copy()
    top = state.space.phonon_cutoff if ladder else 1
    for n in range(top):
        matrix = rotation_matrix(theta * math.sqrt(n + 1), phi)
        _rotate(tensor, _index(state, ion, 0, n + 1), _index(state, ion, upper_level, n), matrix)
    return state.with_tensor(tensor)


def apply_v(state: StateVector, ion: int, theta: float, phi: float) -> StateVector:
    """Carrier pulse on {|0>, |1>} of ion ``ion``; aux and phonons untouched."""
    return _carrier(state, ion, theta, phi, 1)


def apply_v_aux(state: StateVector, ion: int, theta: float, phi: float) -> StateVector:
    """Carrier pulse on {|0>, |aux>} of ion ``ion``; |1> untouched."""
    return _carrier(state, ion, theta, phi, AUX)


def apply_u(state: StateVector, ion: int, theta: float, phi: float, *, ladder: bool = False) -> StateVector:
    """Red-sideband pulse exchanging |1>_m |n> with |0>_m |n+1>."""
    return _sideband(state, ion, theta, phi, 1, ladder)


def apply_u_aux(state: StateVector, ion: int, theta: float, phi: float, *, ladder: bool = False) -> StateVector:
    """Red-sideband pulse exchanging |aux>_m |n> with |0>_m |n+1>."""
    return _sideband(state, ion, theta, phi, AUX, ladder)


_APPLY = {"V": apply_v, "V_aux": apply_v_aux, "U": apply_u, "U_aux": apply_u_aux}


def apply_pulse(state: StateVector, pulse: PulseSpec, *, ladder: bool = False) -> StateVector:
    state.space.check_ion(pulse.ion)
    if pulse.kind in ("U", "U_aux"):
        return _APPLY[pulse.kind](state, pulse.ion, pulse.theta, pulse.phi, ladder=ladder)
    return _APPLY[pulse.kind](state, pulse.ion, pulse.theta, pulse.phi)


def run_sequence(state: StateVector, pulses, *, ladder: bool = False) -> StateVector:
    for pulse in pulses:
        state = apply_pulse(state, pulse, ladder=ladder)
    return state


def load_sequence(path: str | Path) -> list[PulseSpec]:
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, list):
        raise ValueError("a pulse sequence file must hold a JSON list of pulse records")
    return [PulseSpec.from_dict(item) for item in doc]


def dump_sequence(pulses, path: str | Path) -> None:
    Path(path).write_text(json.dumps([p.to_dict() for p in pulses], indent=2, sort_keys=True) + "\n")


# Composite single-ion gates --------------------------------------------------


def hadamard_sequence(ion: int) -> list[PulseSpec]:
    return [PulseSpec("V", ion, 3 * HALF_PI, HALF_PI), PulseSpec("V_aux", ion, 2 * math.pi, HALF_PI)]


def not_composite_sequence(ion: int) -> list[PulseSpec]:
    return [PulseSpec("V", ion, HALF_PI, HALF_PI), PulseSpec("V_aux", ion, 2 * math.pi, HALF_PI)]


def bit_flip_sequence(ion: int) -> list[PulseSpec]:
    return [PulseSpec("V", ion, math.pi, HALF_PI), PulseSpec("V_aux", ion, 2 * math.pi, HALF_PI)]


def hadamard(state: StateVector, ion: int) -> StateVector:
    """V_aux(2pi, pi/2) after V(3pi/2, pi/2): |0> -> (|0>+|1>)/sqrt2, |1> -> (|0>-|1>)/sqrt2."""
    return run_sequence(state, hadamard_sequence(ion))


def not_composite(state: StateVector, ion: int) -> StateVector:
    """V_aux(2pi, pi/2) after V(pi/2, pi/2).

    This composition is not a bit flip: on {|0>, |1>} it acts as the
    reflection (1/sqrt2) [[-1, 1], [1, 1]]. Use :func:`bit_flip` for NOT.
    """
    return run_sequence(state, not_composite_sequence(ion))


def bit_flip(state: StateVector, ion: int) -> StateVector:
    """Exact NOT: V(pi, pi/2) followed by the V_aux(2pi, pi/2) sign fix."""
    return run_sequence(state, bit_flip_sequence(ion))


# Two-ion gate ------------------------------------------------------------------


def cnot_sequence(control: int, target: int, *, verbatim: bool = False) -> list[PulseSpec]:
    """Five-pulse controlled-NOT through the phonon bus.

    The default closes the target with the inverse carrier pulse V(pi/2, -pi/2)
    and returns the bus with U(pi, pi), which yields an exact CNOT. With
    ``verbatim=True`` both outer carrier pulses are V(pi/2, pi/2) and both bus
    pulses U(pi, 0); that sequence flips the target when the control is |0>
    and is not a CNOT.
    """
    if control == target:
        raise ValueError("control and target must be different ions")
    close_phi, return_phi = (HALF_PI, 0.0) if verbatim else (-HALF_PI, math.pi)
    return [
        PulseSpec("V", target, HALF_PI, HALF_PI),
        PulseSpec("U", control, math.pi, 0.0),
        PulseSpec("U_aux", target, 2 * math.pi, 0.0),
        PulseSpec("U", control, math.pi, return_phi),
        PulseSpec("V", target, HALF_PI, close_phi),
    ]


def cnot(state: StateVector, control: int, target: int, *, verbatim: bool = False) -> StateVector:
    """Controlled-NOT on ions ``control`` -> ``target`` (phonon bus must start in |0>)."""
    state.space.check_ion(control)
    state.space.check_ion(target)
    return run_sequence(state, cnot_sequence(control, target, verbatim=verbatim))


def cnot_verbatim(state: StateVector, control: int, target: int) -> StateVector:
    return cnot(state, control, target, verbatim=True)
