"""Laser-ion coupling strengths, pulse-duration bounds, power and error budgets.

The Rabi-frequency chain used throughout::

    Omega_1 = pi / t_U                      (U-type pi pulse)
    Omega_0 = sqrt(N) * Omega_1 / eta       (sideband -> carrier)
    E       from Omega_0 (single or Raman)  (field amplitude)
    P       = (c eps0 / 4) pi w0^2 |E|^2    (Gaussian beam power)

A.C. Stark shifts are ignored.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from iontrapqc.constants import CONSTANTS, TWO_PI
from iontrapqc.species import IonSpecies, Transition

SCHEMES = ("single", "raman")
ERROR_SCHEMES = ("standing", "traveling", "raman")
STANDING_WAVE_FACTOR = 2.6
LAMB_DICKE_FLAG = 0.3
RAMAN_DETUNING_RATIO = 10.0

# Minimum error per CNOT for Ca+, (prefactor, exponent of N).
GATE_ERROR_LAWS = {
    "standing": (8.9e-6, 1.0 / 3.0),
    "traveling": (3.6e-5, 0.5),
    "raman": (1.3e-8, 0.5),
}

DEFAULT_PROJECTION = math.sin(math.radians(10.0))


class ApproximationWarning(UserWarning):
    """An input sits outside the regime where a formula is trustworthy."""


@dataclass(frozen=True)
class LaserParams:
    """Addressing-laser description.

    For ``scheme="single"`` ``axial_projection`` is k_hat . e_x of the beam.
    For ``scheme="raman"`` the pump and Stokes beams each carry their own
    projection (in [-1, 1]); there is deliberately no default geometry.
    """

    scheme: str = "single"
    wavelength: float = 729.347e-9  # m; pump wavelength for Raman
    stokes_wavelength: float | None = None  # m, Raman only (defaults to pump wavelength)
    field: float = 0.0  # V/m; pump field for Raman
    stokes_field: float = 0.0  # V/m, Raman only
    polarization_factor: float = 1.0
    raman_detuning: float | None = None  # rad/s
    axial_projection: float = DEFAULT_PROJECTION
    pump_projection: float | None = None
    stokes_projection: float | None = None
    spot_radius: float = 10e-6  # m, 1/e^2 intensity radius

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if not 0 < self.polarization_factor <= 1:
            raise ValueError("polarization_factor must lie in (0, 1]")
        if not self.wavelength > 0 or not self.spot_radius > 0:
            raise ValueError("wavelength and spot_radius must be positive")
        if self.scheme == "single":
            if not 0 < self.axial_projection <= 1:
                raise ValueError("axial_projection must lie in (0, 1]")
        else:
            if not self.raman_detuning:
                raise ValueError("Raman scheme needs a nonzero raman_detuning")
            if self.pump_projection is None or self.stokes_projection is None:
                raise ValueError("Raman scheme needs explicit pump and Stokes projections")

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def axial_wavenumber(self) -> float:
        """Wavevector component along the trap axis (rad/m)."""
        if self.scheme == "single":
            return self.wavenumber * self.axial_projection
        k_s = TWO_PI / (self.stokes_wavelength or self.wavelength)
        return abs(self.wavenumber * self.pump_projection - k_s * self.stokes_projection)


def lamb_dicke(species: IonSpecies, axial_frequency: float, params: LaserParams) -> float:
    """eta = sqrt(hbar / (2 M w_x)) * k_axial."""
    if not axial_frequency > 0:
        raise ValueError("axial frequency must be positive")
    ground_width = math.sqrt(CONSTANTS.reduced_planck / (2 * species.mass * axial_frequency))
    return ground_width * params.axial_wavenumber


def _coupling_length(transition: Transition) -> float:
    """sqrt(A / (c alpha k^3)) in metres."""
    k = transition.wavenumber
    return math.sqrt(transition.einstein_a / (CONSTANTS.speed_of_light * CONSTANTS.fine_structure * k**3))


def rabi_zero(params: LaserParams, transition: Transition) -> float:
    """Carrier Rabi frequency Omega_0 in rad/s.

    Single laser: (e E / hbar) sqrt(A / (c alpha k^3)) beta.
    Raman: (e^2 A / (hbar^2 c alpha k^3)) E_p E_s / (4 delta) beta, where A and
    k belong to the transition to the detuned intermediate level.
    """
    e, hbar = CONSTANTS.elementary_charge, CONSTANTS.reduced_planck
    beta = params.polarization_factor
    length = _coupling_length(transition)
    if params.scheme == "single":
        return e * params.field / hbar * length * beta
    omega = (e * length / hbar) ** 2 * params.field * params.stokes_field / (4 * params.raman_detuning) * beta
    if omega and abs(params.raman_detuning) < RAMAN_DETUNING_RATIO * abs(omega):
        warnings.warn(
            f"Raman detuning {params.raman_detuning:.3e} rad/s is not large against Omega_0 = {omega:.3e} rad/s",
            ApproximationWarning,
            stacklevel=2,
        )
    return omega


def field_for_rabi_zero(omega0: float, params: LaserParams, transition: Transition) -> float:
    """Field amplitude (V/m) giving carrier Rabi frequency ``omega0``.

    For Raman the pump and Stokes amplitudes are taken equal and the returned
    value is that common amplitude.
    """
    e, hbar = CONSTANTS.elementary_charge, CONSTANTS.reduced_planck
    beta = params.polarization_factor
    length = _coupling_length(transition)
    if params.scheme == "single":
        return omega0 * hbar / (e * length * beta)
    product = 4 * abs(params.raman_detuning) * omega0 / beta * (hbar / (e * length)) ** 2
    return math.sqrt(product)


def rabi_one(omega0: float, eta: float, ion_count: int) -> float:
    """Sideband Rabi frequency Omega_1 = (eta / sqrt(N)) Omega_0."""
    return _lamb_dicke_ratio(eta, ion_count) * omega0


def _lamb_dicke_ratio(eta: float, ion_count: int) -> float:
    """eta / sqrt(N), with a warning when it is not small."""
    if ion_count < 1:
        raise ValueError("ion_count must be at least 1")
    ratio = eta / math.sqrt(ion_count)
    if ratio > LAMB_DICKE_FLAG:
        warnings.warn(
            f"eta/sqrt(N) = {ratio:.3f} is not small; sideband formula suspect",
            ApproximationWarning,
            stacklevel=3,
        )
    return ratio


@dataclass(frozen=True)
class PulseBounds:
    """Durations the pulses must greatly exceed (seconds)."""

    t_v_min: float
    t_u_traveling_min: float
    t_u_standing_min: float


def pulse_bounds(ion_count: int, eta: float, axial_frequency: float) -> PulseBounds:
    if ion_count < 1:
        raise ValueError("ion_count must be at least 1")
    if not (eta > 0 and axial_frequency > 0):
        raise ValueError("eta and axial frequency must be positive")
    root_n = math.sqrt(ion_count)
    return PulseBounds(
        t_v_min=math.pi * eta / (root_n * axial_frequency),
        t_u_traveling_min=math.pi * root_n / (eta * axial_frequency),
        t_u_standing_min=STANDING_WAVE_FACTOR * math.pi / axial_frequency,
    )


@dataclass(frozen=True)
class PowerEstimate:
    power: float  # W, per beam for Raman
    field: float  # V/m
    rabi_zero: float  # rad/s
    rabi_one: float  # rad/s
    eta: float
    printed_formula_value: float  # closed-form expression as printed; not dimensionally a power
    derivation: dict = field(default_factory=dict)


def _printed_power_formula(params, t_u, axial_frequency, ion_count, species, transition) -> float:
    hbar, c = CONSTANTS.reduced_planck, CONSTANTS.speed_of_light
    w0, m, a = params.spot_radius, species.mass, transition.einstein_a
    omega_l = TWO_PI * c / params.wavelength
    if params.scheme == "single":
        return hbar * w0**2 * omega_l * axial_frequency * ion_count * m / (a * t_u**2)
    return (
        hbar * w0**2 * omega_l**2 * abs(params.raman_detuning) * ion_count * m / (c * a * t_u)
        * math.sqrt(ion_count * m * hbar * axial_frequency)
    )


def laser_power(
    params: LaserParams,
    t_u: float,
    axial_frequency: float,
    ion_count: int,
    species: IonSpecies,
    transition: Transition,
) -> PowerEstimate:
    """Beam power needed for a U-type pi pulse of duration ``t_u``.

    Derived from the Rabi-frequency chain in the module docstring; the
    closed-form expression is reported alongside for comparison only.
    """
    if not t_u > 0:
        raise ValueError("t_u must be positive")
    eta = lamb_dicke(species, axial_frequency, params)
    omega1 = math.pi / t_u
    omega0 = omega1 / _lamb_dicke_ratio(eta, ion_count)
    amplitude = field_for_rabi_zero(omega0, params, transition)
    power = CONSTANTS.speed_of_light * CONSTANTS.vacuum_permittivity / 4 * math.pi * params.spot_radius**2 * amplitude**2
    return PowerEstimate(
        power=power,
        field=amplitude,
        rabi_zero=omega0,
        rabi_one=omega1,
        eta=eta,
        printed_formula_value=_printed_power_formula(params, t_u, axial_frequency, ion_count, species, transition),
        derivation={
            "omega1": "pi / t_u",
            "omega0": "sqrt(N) * omega1 / eta",
            "field": "inverted carrier Rabi formula" + (" (equal pump and Stokes amplitudes)" if params.scheme == "raman" else ""),
            "power": "(c eps0 / 4) pi w0^2 |E|^2" + (" per beam" if params.scheme == "raman" else ""),
            "einstein_a": transition.einstein_a,
            "transition": transition.label,
            "polarization_factor": params.polarization_factor,
        },
    )


def gate_error(scheme: str, ion_count: int) -> float:
    """Minimum error probability per CNOT for Ca+ ions."""
    if scheme not in GATE_ERROR_LAWS:
        raise ValueError(f"scheme must be one of {ERROR_SCHEMES}")
    if ion_count < 1:
        raise ValueError("ion_count must be at least 1")
    prefactor, exponent = GATE_ERROR_LAWS[scheme]
    return prefactor * ion_count**exponent


@dataclass(frozen=True)
class ToleranceReport:
    eta: float
    t_v_min: float
    t_u_min_traveling: float
    t_u_min_standing: float
    power: float
    gate_error: float
    power_estimate: PowerEstimate


def tolerance_report(
    params: LaserParams,
    species: IonSpecies,
    transition: Transition,
    ion_count: int,
    axial_frequency: float,
    t_u: float,
    error_scheme: str | None = None,
) -> ToleranceReport:
    eta = lamb_dicke(species, axial_frequency, params)
    bounds = pulse_bounds(ion_count, eta, axial_frequency)
    estimate = laser_power(params, t_u, axial_frequency, ion_count, species, transition)
    if error_scheme is None:
        error_scheme = "raman" if params.scheme == "raman" else "traveling"
    return ToleranceReport(
        eta=eta,
        t_v_min=bounds.t_v_min,
        t_u_min_traveling=bounds.t_u_traveling_min,
        t_u_min_standing=bounds.t_u_standing_min,
        power=estimate.power,
        gate_error=gate_error(error_scheme, ion_count),
        power_estimate=estimate,
    )
