"""Linear Paul trap design formulas.

Conventions
-----------
* Pseudopotential depth is the pseudopotential energy at the electrode
  radius ``r0`` (rho = r0), reported in eV.
* The thermal localization radius is the 1-sigma width of a thermal
  distribution in the radial pseudowell, sqrt(k_B T / (M w_r^2)).
* The axial frequency follows the calibrated law
  ``w_x = w_ref * sqrt(kappa * V / V_ref)``; the default calibration point is
  150 V -> 2 pi x 200 kHz and ``kappa`` rescales the endcap shielding
  relative to that calibration.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from iontrapqc.constants import CONSTANTS, EV, TWO_PI
from iontrapqc.species import IonSpecies

PSEUDOPOTENTIAL_Q_LIMIT = 0.9

CONVENTIONS = {
    "frequencies": "angular (rad/s) internally; *_hz / *_mhz / *_khz fields are ordinary frequencies",
    "pseudo_well_depth": "pseudopotential energy at rho = r0, in eV",
    "localization_radius": "1-sigma thermal radius sqrt(kB T / (M w_r^2))",
    "axial_frequency": "w_x = w_ref * sqrt(kappa * V_endcap / V_ref)",
}


class PseudopotentialWarning(UserWarning):
    """Mathieu q is large enough that the pseudopotential picture is suspect."""


@dataclass(frozen=True)
class AxialCalibration:
    reference_voltage: float = 150.0  # V
    reference_frequency: float = TWO_PI * 200e3  # rad/s

    def __post_init__(self):
        if not (self.reference_voltage > 0 and self.reference_frequency > 0):
            raise ValueError("calibration point must be positive")

    def axial_strength(self, species: IonSpecies) -> float:
        """Effective curvature per volt, M w^2 / (2 e V), in 1/m^2."""
        return species.mass * self.reference_frequency**2 / (2 * species.charge * self.reference_voltage)


DEFAULT_AXIAL_CALIBRATION = AxialCalibration()


@dataclass(frozen=True)
class TrapConfig:
    species: IonSpecies
    rf_amplitude: float  # V
    rf_frequency: float  # rad/s
    r0: float  # m
    dc_offset: float = 0.0  # V
    endcap_voltage: float = 0.0  # V
    shielding_factor: float = 1.0
    calibration: AxialCalibration = field(default=DEFAULT_AXIAL_CALIBRATION)

    def __post_init__(self):
        if not self.rf_amplitude > 0:
            raise ValueError("rf_amplitude must be positive")
        if not self.rf_frequency > 0:
            raise ValueError("rf_frequency must be positive")
        if not self.r0 > 0:
            raise ValueError("r0 must be positive")
        if not 0 < self.shielding_factor <= 1:
            raise ValueError("shielding_factor must lie in (0, 1]")
        if self.endcap_voltage < 0:
            raise ValueError("endcap_voltage must be non-negative")

    @property
    def _drive_scale(self) -> float:
        return self.species.mass * self.rf_frequency**2 * self.r0**2


def mathieu_parameters(trap: TrapConfig) -> tuple[float, float]:
    """Return ``(a, q)`` with a = 4 e U_dc / (M W^2 r0^2), q = 2 e V_rf / (M W^2 r0^2)."""
    e = trap.species.charge
    a = 4 * e * trap.dc_offset / trap._drive_scale
    q = 2 * e * trap.rf_amplitude / trap._drive_scale
    return a, q


def pseudopotential_depth(trap: TrapConfig) -> float:
    """Radial pseudowell depth in eV, e^2 V_rf^2 / (4 M W^2 r0^2)."""
    e = trap.species.charge
    energy = e**2 * trap.rf_amplitude**2 / (4 * trap._drive_scale)
    return energy / EV


def secular_frequency(trap: TrapConfig) -> float:
    """Radial secular frequency e V_rf / (sqrt(2) M W r0^2) in rad/s.

    Emits :class:`PseudopotentialWarning` when q >= 0.9.
    """
    _, q = mathieu_parameters(trap)
    if q >= PSEUDOPOTENTIAL_Q_LIMIT:
        warnings.warn(
            f"Mathieu q = {q:.3f} >= {PSEUDOPOTENTIAL_Q_LIMIT}: pseudopotential approximation suspect",
            PseudopotentialWarning,
            stacklevel=2,
        )
    e = trap.species.charge
    return e * trap.rf_amplitude / (math.sqrt(2) * trap.species.mass * trap.rf_frequency * trap.r0**2)


def axial_frequency(
    endcap_voltage: float,
    trap: TrapConfig | None = None,
    calibration: AxialCalibration | None = None,
) -> float:
    """Axial trap frequency (rad/s) for the given endcap voltage."""
    if endcap_voltage < 0:
        raise ValueError("endcap voltage must be non-negative")
    kappa = 1.0
    if trap is not None:
        kappa = trap.shielding_factor
        calibration = calibration or trap.calibration
    calibration = calibration or DEFAULT_AXIAL_CALIBRATION
    return calibration.reference_frequency * math.sqrt(kappa * endcap_voltage / calibration.reference_voltage)


def thermal_localization(temperature: float, radial_frequency: float, species: IonSpecies) -> float:
    """1-sigma radial extent (m) of an ion at ``temperature`` in a well of ``radial_frequency``."""
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    if not radial_frequency > 0:
        raise ValueError("radial frequency must be positive")
    return math.sqrt(CONSTANTS.boltzmann * temperature / (species.mass * radial_frequency**2))


def crosstalk(ion_spacing: float, spot_diameter: float) -> float:
    """Relative Gaussian intensity at a neighbouring ion.

    ``spot_diameter`` is the 1/e^2 intensity diameter; the beam waist is half
    of it and the intensity ratio is exp(-2 s^2 / w^2).
    """
    if not ion_spacing > 0:
        raise ValueError("ion spacing must be positive")
    if not spot_diameter > 0:
        raise ValueError("spot diameter must be positive")
    waist = spot_diameter / 2
    return math.exp(-2 * ion_spacing**2 / waist**2)


def max_spot_diameter(ion_spacing: float, max_crosstalk: float) -> float:
    """Largest 1/e^2 diameter that keeps crosstalk at or below ``max_crosstalk``."""
    if not 0 < max_crosstalk < 1:
        raise ValueError("crosstalk bound must lie in (0, 1)")
    return 2 * ion_spacing * math.sqrt(2 / -math.log(max_crosstalk))


@dataclass(frozen=True)
class TrapReport:
    mathieu_a: float
    mathieu_q: float
    secular_frequency: float  # rad/s
    pseudo_well_depth: float  # eV
    axial_frequency: float  # rad/s
    localization_radius: float | None  # m
    temperature: float | None  # K
    flags: tuple[str, ...] = ()


def trap_report(trap: TrapConfig, temperature: float | None = None) -> TrapReport:
    a, q = mathieu_parameters(trap)
    flags = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PseudopotentialWarning)
        w_r = secular_frequency(trap)
    if caught:
        flags.append("pseudopotential_suspect")
    radius = thermal_localization(temperature, w_r, trap.species) if temperature else None
    return TrapReport(
        mathieu_a=a,
        mathieu_q=q,
        secular_frequency=w_r,
        pseudo_well_depth=pseudopotential_depth(trap),
        axial_frequency=axial_frequency(trap.endcap_voltage, trap),
        localization_radius=radius,
        temperature=temperature,
        flags=tuple(flags),
    )
