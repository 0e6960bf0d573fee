"""Physical constants and unit helpers.

Everything inside the package is SI. Frequencies are angular (rad/s); the
helpers below convert from the ``2*pi x <value> Hz`` notation used for trap
and laser parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as _sc


@dataclass(frozen=True)
class PhysicalConstants:
    elementary_charge: float  # C
    vacuum_permittivity: float  # F/m
    reduced_planck: float  # J s
    boltzmann: float  # J/K
    speed_of_light: float  # m/s
    fine_structure: float
    atomic_mass_unit: float  # kg

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value!r}")

    @property
    def coulomb_constant(self) -> float:
        """e^2 / (4 pi eps0) in J m."""
        return self.elementary_charge**2 / (4 * math.pi * self.vacuum_permittivity)


CONSTANTS = PhysicalConstants(
    elementary_charge=_sc.e,
    vacuum_permittivity=_sc.epsilon_0,
    reduced_planck=_sc.hbar,
    boltzmann=_sc.k,
    speed_of_light=_sc.c,
    fine_structure=_sc.fine_structure,
    atomic_mass_unit=_sc.atomic_mass,
)

TWO_PI = 2 * math.pi
EV = _sc.electron_volt


def angular(freq_hz: float) -> float:
    """Ordinary frequency (Hz) to angular frequency (rad/s)."""
    return TWO_PI * freq_hz


def ordinary(omega: float) -> float:
    """Angular frequency (rad/s) to ordinary frequency (Hz)."""
    return omega / TWO_PI


def doppler_limit(linewidth: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Doppler cooling limit T = hbar * Gamma / (2 k_B).

    Parameters
    ----------
    linewidth : float
        Natural linewidth Gamma of the cooling transition in rad/s.

    Returns
    -------
    float
        Temperature in kelvin.
    """
    if not linewidth > 0:
        raise ValueError(f"linewidth must be positive, got {linewidth!r}")
    return constants.reduced_planck * linewidth / (2 * constants.boltzmann)


def linewidth_for_doppler_limit(temperature: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Inverse of :func:`doppler_limit`: the linewidth (rad/s) giving ``temperature``."""
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    return 2 * constants.boltzmann * temperature / constants.reduced_planck
