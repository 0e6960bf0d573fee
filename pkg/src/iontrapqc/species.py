"""Ion species records and the embedded level/transition tables."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from iontrapqc.constants import CONSTANTS, TWO_PI

TRANSITION_KINDS = ("dipole", "quadrupole")


@dataclass(frozen=True)
class Transition:
    """One radiative transition of an ion.

    ``lifetime`` is the lifetime of the upper level. For levels with several
    decay channels ``einstein_a * lifetime`` equals the branching fraction of
    this channel, which must agree with ``branching_ratio`` to within
    ``branching_tolerance``.
    """

    label: str
    wavelength: float  # m
    einstein_a: float  # 1/s
    lifetime: float  # s
    kind: str
    branching_ratio: float = 1.0
    branching_tolerance: float = 0.01

    def __post_init__(self):
        if self.kind not in TRANSITION_KINDS:
            raise ValueError(f"unknown transition kind {self.kind!r}")
        for name in ("wavelength", "einstein_a", "lifetime"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{self.label}: {name} must be positive")
        if not 0 < self.branching_ratio <= 1:
            raise ValueError(f"{self.label}: branching_ratio must lie in (0, 1]")
        mismatch = abs(self.einstein_a * self.lifetime - self.branching_ratio)
        if mismatch > self.branching_tolerance:
            raise ValueError(
                f"{self.label}: A*tau = {self.einstein_a * self.lifetime:.4g} inconsistent "
                f"with branching ratio {self.branching_ratio} (tolerance {self.branching_tolerance})"
            )

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def angular_frequency(self) -> float:
        return TWO_PI * CONSTANTS.speed_of_light / self.wavelength

    @property
    def linewidth(self) -> float:
        """Natural linewidth (rad/s) of the upper level, 1/lifetime."""
        return 1.0 / self.lifetime


@dataclass(frozen=True)
class IonSpecies:
    name: str
    mass: float  # kg
    charge_multiplier: int
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if self.charge_multiplier != 1:
            raise ValueError("only singly ionized species are supported")

    @property
    def charge(self) -> float:
        return self.charge_multiplier * CONSTANTS.elementary_charge

    def transition(self, key: str | float) -> Transition:
        """Look up a transition by label or by wavelength in nm (nearest within 1 nm)."""
        if isinstance(key, str):
            for tr in self.transitions:
                if tr.label == key:
                    return tr
            try:
                key = float(key.removesuffix("nm"))
            except ValueError:
                raise KeyError(f"{self.name} has no transition {key!r}") from None
        best = min(self.transitions, key=lambda tr: abs(tr.wavelength * 1e9 - key))
        if abs(best.wavelength * 1e9 - key) > 1.0:
            raise KeyError(f"{self.name} has no transition near {key} nm")
        return best

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "mass": self.mass,
            "charge_multiplier": self.charge_multiplier,
            "transitions": [asdict(tr) for tr in self.transitions],
        }


def species_from_dict(doc: dict[str, Any]) -> IonSpecies:
    """Build an :class:`IonSpecies` from a JSON-style mapping.

    The mass is given either directly in kg (``mass``) or in atomic mass
    units (``mass_u``).
    """
    if "mass" in doc:
        mass = float(doc["mass"])
    elif "mass_u" in doc:
        mass = float(doc["mass_u"]) * CONSTANTS.atomic_mass_unit
    else:
        raise ValueError("species document needs 'mass' or 'mass_u'")
    transitions = tuple(
        Transition(
            label=t["label"],
            wavelength=float(t["wavelength"]),
            einstein_a=float(t["einstein_a"]),
            lifetime=float(t["lifetime"]),
            kind=t["kind"],
            branching_ratio=float(t.get("branching_ratio", 1.0)),
            branching_tolerance=float(t.get("branching_tolerance", 0.01)),
        )
        for t in doc.get("transitions", [])
    )
    return IonSpecies(
        name=doc["name"],
        mass=mass,
        charge_multiplier=int(doc.get("charge_multiplier", 1)),
        transitions=transitions,
    )


def load_species(source: str | Path) -> IonSpecies:
    """Load a species from a JSON file path, or a bundled name such as ``"ca40"``."""
    path = Path(source)
    if path.suffix == ".json" and path.exists():
        return species_from_dict(json.loads(path.read_text()))
    return _bundled(str(source).lower())


@lru_cache(maxsize=None)
def _bundled(name: str) -> IonSpecies:
    try:
        text = resources.files("iontrapqc.data").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise KeyError(f"no bundled species {name!r}") from None
    return species_from_dict(json.loads(text))


def ca40_species() -> IonSpecies:
    """The 40Ca+ record: mass, charge and the S/P/D transition table."""
    return _bundled("ca40")


def cooling_linewidth(species: IonSpecies, label: str = "S1/2-P1/2") -> float:
    """Natural linewidth (rad/s) of the Doppler cooling transition."""
    return species.transition(label).linewidth


def coulomb_energy_scale() -> float:
    """e^2/(4 pi eps0) in J m; handy for unit sanity checks."""
    return CONSTANTS.coulomb_constant


__all__ = [
    "Transition",
    "IonSpecies",
    "ca40_species",
    "load_species",
    "species_from_dict",
    "cooling_linewidth",
    "coulomb_energy_scale",
]
